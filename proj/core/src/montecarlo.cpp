#include "disclose/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "disclose/errors.hpp"

namespace disclose {

std::uint64_t SampleRng::next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SampleRng::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t SampleRng::categorical(std::span<const double> probs) {
    const double u = next_uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return probs.size() - 1;
}

std::uint64_t trial_stream(std::uint64_t seed, std::uint64_t trial_index) {
    // One splitmix64 scramble of the trial index, xored into the seed.
    std::uint64_t z = trial_index + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return seed ^ (z ^ (z >> 31));
}

namespace {

struct PathPlan {
    std::vector<std::vector<std::size_t>> path_edges;  // edge indices per path
    std::vector<std::size_t> sampled_edges;            // union, in sample order
};

PathPlan plan_paths(const Scenario& s, const AgentId& consumer) {
    const auto paths = enumerate_simple_paths(s, consumer);
    if (paths.empty())
        throw ScenarioError("no path from " + s.producer + " to " + consumer);

    std::map<std::pair<AgentId, AgentId>, std::size_t> edge_index;
    for (std::size_t i = 0; i < s.edges.size(); ++i)
        edge_index[{s.edges[i].from, s.edges[i].to}] = i;

    PathPlan plan;
    std::vector<bool> used(s.edges.size(), false);
    for (const auto& path : paths) {
        std::vector<std::size_t> edges;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const std::size_t e = edge_index.at({path[i], path[i + 1]});
            edges.push_back(e);
            if (!used[e]) {
                used[e] = true;
                plan.sampled_edges.push_back(e);
            }
        }
        plan.path_edges.push_back(std::move(edges));
    }
    // Fixed edge sample order, independent of path layout details.
    std::sort(plan.sampled_edges.begin(), plan.sampled_edges.end());
    return plan;
}

struct Welford {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    double stderr_of_mean() const {
        if (n < 2) return 0.0;
        const double var = m2 / static_cast<double>(n - 1);
        return std::sqrt(var / static_cast<double>(n));
    }
};

}  // namespace

SimResult simulate(const Scenario& s, const SimConfig& cfg, const Operators& ops) {
    if (cfg.trials < 1) throw ScenarioError("simulation needs at least one trial");
    const ConsumerModel* cm = s.find_consumer(cfg.consumer);
    if (!cm) throw ScenarioError("no models for consumer " + cfg.consumer);

    const std::size_t message_count = s.message_space.size();
    const bool overridden = cm->x_override.has_value();
    PathPlan plan;
    if (!overridden) plan = plan_paths(s, cfg.consumer);

    // The categorical columns never change across trials; extract them once.
    const auto columns_of = [](const Matrix& m) {
        std::vector<std::vector<double>> cols(m.cols(), std::vector<double>(m.rows()));
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (std::size_t r = 0; r < m.rows(); ++r) cols[c][r] = m(r, c);
        return cols;
    };
    const auto inference_cols = columns_of(cm->inference.matrix);
    const auto benefit_cols = columns_of(cm->impact.benefit_matrix);
    const auto risk_cols = columns_of(cm->impact.risk_matrix);

    Welford benefit_acc, risk_acc, net_acc;
    std::vector<std::uint64_t> message_counts(message_count, 0);
    std::vector<std::uint64_t> risk_counts(cm->impact.risk_values.size(), 0);

    std::vector<char> forwarded(s.edges.size(), 0);
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        SampleRng rng(trial_stream(cfg.seed, t));

        std::size_t received;
        if (overridden) {
            received = rng.categorical(*cm->x_override);
        } else {
            // Realize each relevant edge's forwarding once per trial; every
            // path through an edge sees the same realization.
            for (std::size_t e : plan.sampled_edges)
                forwarded[e] = rng.next_uniform() < s.edges[e].forward_prob ? 1 : 0;

            // Delivered paths degrade by the serial fold with forwarding
            // certain (it was just realized); arrivals fuse pairwise.
            bool any = false;
            double fused = 0.0;
            for (const auto& edges : plan.path_edges) {
                bool delivered = true;
                for (std::size_t e : edges)
                    if (!forwarded[e]) {
                        delivered = false;
                        break;
                    }
                if (!delivered) continue;
                double degree = 1.0;
                for (std::size_t e : edges)
                    degree = combine_serial({1.0, degree}, {1.0, s.edges[e].disclosure},
                                            ops.serial);
                fused = any ? combine_parallel(fused, degree, ops.parallel) : degree;
                any = true;
            }
            const double realized = any ? fused : 0.0;
            const Message& msg = s.message_space.disclose(s.original_message, realized);
            received = *s.message_space.index_of(msg.id);
        }
        ++message_counts[received];

        const std::size_t inferred = rng.categorical(inference_cols[received]);
        const std::size_t benefit_outcome = rng.categorical(benefit_cols[inferred]);
        const std::size_t risk_outcome = rng.categorical(risk_cols[inferred]);
        ++risk_counts[risk_outcome];

        const double b = cm->impact.benefit_values[benefit_outcome];
        const double r = cm->impact.risk_values[risk_outcome];
        benefit_acc.add(b);
        risk_acc.add(r);
        net_acc.add(b - r);
    }

    SimResult result;
    result.trials_used = cfg.trials;
    result.est_benefit = benefit_acc.mean;
    result.stderr_benefit = benefit_acc.stderr_of_mean();
    result.est_risk = risk_acc.mean;
    result.stderr_risk = risk_acc.stderr_of_mean();
    result.est_net = result.est_benefit - result.est_risk;
    result.stderr_net = net_acc.stderr_of_mean();
    result.empirical_x.resize(message_count);
    for (std::size_t i = 0; i < message_count; ++i)
        result.empirical_x[i] =
            static_cast<double>(message_counts[i]) / static_cast<double>(cfg.trials);
    result.empirical_impact.resize(risk_counts.size());
    for (std::size_t i = 0; i < risk_counts.size(); ++i)
        result.empirical_impact[i] =
            static_cast<double>(risk_counts[i]) / static_cast<double>(cfg.trials);
    return result;
}

SimResult simulate(const Scenario& s, const SimConfig& cfg) {
    return simulate(s, cfg, operators_for(s));
}

namespace {

double z_score(double analytic, double estimate, double stderr_est) {
    if (stderr_est > 0.0) return (analytic - estimate) / stderr_est;
    return analytic == estimate ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

OracleComparison oracle_compare(const Scenario& s, const AgentId& consumer,
                                const SimConfig& cfg, const Operators& ops) {
    SimConfig with_consumer = cfg;
    with_consumer.consumer = consumer;

    OracleComparison cmp;
    cmp.analytic = evaluate(s, consumer, ops);
    cmp.sim = simulate(s, with_consumer, ops);
    cmp.z_benefit = z_score(cmp.analytic.expected_benefit, cmp.sim.est_benefit,
                            cmp.sim.stderr_benefit);
    cmp.z_risk = z_score(cmp.analytic.expected_risk, cmp.sim.est_risk, cmp.sim.stderr_risk);
    cmp.z_net = z_score(cmp.analytic.expected_net, cmp.sim.est_net, cmp.sim.stderr_net);
    cmp.pass = std::abs(cmp.z_benefit) <= 3.0 && std::abs(cmp.z_risk) <= 3.0 &&
               std::abs(cmp.z_net) <= 3.0;
    return cmp;
}

OracleComparison oracle_compare(const Scenario& s, const AgentId& consumer,
                                const SimConfig& cfg) {
    return oracle_compare(s, consumer, cfg, operators_for(s));
}

}  // namespace disclose
