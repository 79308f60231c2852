#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "disclose/impact.hpp"
#include "disclose/montecarlo.hpp"
#include "disclose/scenario.hpp"

#ifndef DISCLOSE_SCENARIO_DIR
#define DISCLOSE_SCENARIO_DIR "scenarios"
#endif

namespace testutil {

inline std::string scenario_path(const std::string& name) {
    return std::string(DISCLOSE_SCENARIO_DIR) + "/" + name;
}

/// Deterministic generator state for property tests; uses the project's
/// portable RNG so generated cases are identical everywhere.
struct Gen {
    disclose::SampleRng rng;

    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * rng.next_uniform();
    }
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(rng.next_u64() % n);
    }
    bool flip(double p = 0.5) { return rng.next_uniform() < p; }
};

inline disclose::Matrix random_column_stochastic(Gen& gen, std::size_t rows,
                                                 std::size_t cols) {
    disclose::Matrix m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double v = gen.uniform(1e-3, 1.0);
            m(r, c) = v;
            sum += v;
        }
        for (std::size_t r = 0; r < rows; ++r) m(r, c) /= sum;
    }
    return m;
}

/// Binary worked case as a full scenario: producer P, one consumer C on a
/// direct certain edge at degree 0.5, so the middle message is delivered.
inline disclose::Scenario make_binary_scenario(const disclose::BinaryCase& bc) {
    using namespace disclose;
    Scenario s;
    s.agents = {"P", "C"};
    s.edges = {{"P", "C", 1.0, 0.5}};
    s.message_space.messages = {
        {"m1", "original", 1.0}, {"m2", "degraded", 0.5}, {"m0", "nothing", 0.0}};
    s.producer = "P";
    s.original_message = "m1";

    ConsumerModel cm;
    cm.consumer = "C";
    cm.inference.labels = {"y0", "y1"};
    cm.inference.matrix = Matrix::from_rows({{bc.u_m1, bc.u_m2, 1.0},
                                             {1.0 - bc.u_m1, 1.0 - bc.u_m2, 0.0}});
    cm.impact.benefit_matrix = Matrix::ones(1, 2);
    cm.impact.benefit_values = {bc.benefit};
    cm.impact.risk_matrix = Matrix::from_rows({{bc.w_y0, bc.w_y1},
                                               {1.0 - bc.w_y0, 1.0 - bc.w_y1}});
    cm.impact.risk_values = {bc.risk_low, bc.risk_high};
    s.consumers.push_back(std::move(cm));
    return s;
}

/// Random well-formed scenario: a producer, a guaranteed edge to each
/// modeled consumer plus random extra edges, and random stochastic models.
inline disclose::Scenario random_scenario(Gen& gen, bool certain_forwarding = true) {
    using namespace disclose;
    Scenario s;
    const std::size_t agent_count = 3 + gen.index(4);  // 3..6
    for (std::size_t i = 0; i < agent_count; ++i) s.agents.push_back("a" + std::to_string(i));
    s.producer = s.agents[0];

    const std::size_t message_count = 3 + gen.index(3);  // 3..5
    for (std::size_t i = 0; i < message_count; ++i) {
        const double level =
            i == 0 ? 1.0
                   : (i + 1 == message_count
                          ? 0.0
                          : 1.0 - static_cast<double>(i) / (message_count - 1) +
                                gen.uniform(-0.05, 0.05));
        s.message_space.messages.push_back({"m" + std::to_string(i), "", level});
    }
    // Levels must be strictly decreasing; the jitter above cannot cross
    // neighbours (grid spacing >= 1/4, jitter < 0.1) but sort defensively.
    std::sort(s.message_space.messages.begin(), s.message_space.messages.end(),
              [](const Message& a, const Message& b) { return a.info_level > b.info_level; });
    s.original_message = s.message_space.messages.front().id;

    const auto edge_prob = [&]() { return certain_forwarding ? 1.0 : gen.uniform(); };
    const std::size_t consumer_count = 1 + gen.index(std::min<std::size_t>(2, agent_count - 1));
    std::vector<AgentId> modeled;
    for (std::size_t i = 1; i <= consumer_count; ++i) modeled.push_back(s.agents[i]);

    for (const auto& c : modeled) s.edges.push_back({s.producer, c, edge_prob(), gen.uniform()});
    // Extra random edges between distinct agents, skipping duplicates.
    const std::size_t extra = gen.index(2 * agent_count);
    for (std::size_t i = 0; i < extra; ++i) {
        const AgentId from = s.agents[gen.index(agent_count)];
        const AgentId to = s.agents[gen.index(agent_count)];
        if (from == to) continue;
        const bool exists = std::any_of(s.edges.begin(), s.edges.end(), [&](const auto& e) {
            return e.from == from && e.to == to;
        });
        if (!exists) s.edges.push_back({from, to, edge_prob(), gen.uniform()});
    }

    const std::size_t inference_count = 2 + gen.index(3);  // 2..4
    for (const auto& c : modeled) {
        ConsumerModel cm;
        cm.consumer = c;
        for (std::size_t i = 0; i < inference_count; ++i)
            cm.inference.labels.push_back("y" + std::to_string(i));
        cm.inference.matrix = random_column_stochastic(gen, inference_count, message_count);
        const std::size_t benefit_count = 2 + gen.index(3);
        const std::size_t risk_count = 2 + gen.index(3);
        cm.impact.benefit_matrix = random_column_stochastic(gen, benefit_count, inference_count);
        cm.impact.risk_matrix = random_column_stochastic(gen, risk_count, inference_count);
        for (std::size_t i = 0; i < benefit_count; ++i)
            cm.impact.benefit_values.push_back(gen.uniform(0.0, 1e5));
        for (std::size_t i = 0; i < risk_count; ++i)
            cm.impact.risk_values.push_back(gen.uniform(0.0, 1e5));
        s.consumers.push_back(std::move(cm));
    }
    return s;
}

}  // namespace testutil
