#include "disclose/impact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "disclose/errors.hpp"

namespace disclose {

const char* to_string(Verdict v) {
    return v == Verdict::share ? "SHARE" : "WITHHOLD";
}

ImpactDistribution impact_distribution(const Matrix& impact, const Matrix& inference,
                                       const MessageDistribution& x) {
    if (inference.cols() != x.x.size())
        throw ScenarioError("inference matrix for " + x.consumer + " expects " +
                            std::to_string(inference.cols()) + " messages, distribution has " +
                            std::to_string(x.x.size()));
    if (impact.cols() != inference.rows())
        throw ScenarioError("impact matrix for " + x.consumer + " expects " +
                            std::to_string(impact.cols()) + " inferences, model has " +
                            std::to_string(inference.rows()));
    std::vector<double> y = mat_vec(inference, x.x);
    return {x.consumer, mat_vec(impact, y)};
}

double expected_impact(std::span<const double> values, const ImpactDistribution& dist) {
    if (values.size() != dist.probs.size())
        throw ScenarioError("impact values for " + dist.consumer + " have length " +
                            std::to_string(values.size()) + ", distribution has " +
                            std::to_string(dist.probs.size()));
    return dot(values, dist.probs);
}

namespace {

/// Fixed-benefit detection: one all-ones benefit row makes E[B] the
/// scalar regardless of the received message.
std::optional<double> fixed_benefit(const ImpactModel& im) {
    if (im.benefit_matrix.rows() != 1 || im.benefit_values.size() != 1) return std::nullopt;
    for (double v : im.benefit_matrix.data())
        if (v != 1.0) return std::nullopt;
    return im.benefit_values[0];
}

void fill_threshold(DecisionReport& report, const ConsumerModel& cm,
                    std::span<const double> risk_probs) {
    const auto bbar = fixed_benefit(cm.impact);
    if (!bbar) return;
    if (cm.impact.risk_values.size() != 2) return;
    const double r0 = cm.impact.risk_values[0];
    const double r1 = cm.impact.risk_values[1];
    if (r0 == r1) return;
    const std::size_t low = r0 < r1 ? 0 : 1;
    const double risk_low = cm.impact.risk_values[low];
    const double risk_high = cm.impact.risk_values[1 - low];
    report.threshold_lhs = (risk_high - *bbar) / (risk_high - risk_low);
    report.threshold_rhs = risk_probs[low];
}

DecisionReport evaluate_with_x(const ConsumerModel& cm,
                               const MessageDistribution& x, double delta,
                               bool overridden) {
    DecisionReport report;
    report.consumer = cm.consumer;
    report.delta = delta;
    report.x_overridden = overridden;

    const ImpactDistribution risk =
        impact_distribution(cm.impact.risk_matrix, cm.inference.matrix, x);
    // Declared shared table: one distribution serves both sides.
    const ImpactDistribution benefit =
        cm.impact.shared_impact
            ? risk
            : impact_distribution(cm.impact.benefit_matrix, cm.inference.matrix, x);
    report.expected_benefit = expected_impact(cm.impact.benefit_values, benefit);
    report.expected_risk = expected_impact(cm.impact.risk_values, risk);
    report.expected_net = report.expected_benefit - report.expected_risk;
    report.verdict = report.expected_net >= 0.0 ? Verdict::share : Verdict::withhold;
    fill_threshold(report, cm, risk.probs);
    return report;
}

const ConsumerModel& consumer_or_throw(const Scenario& s, const AgentId& consumer) {
    const ConsumerModel* cm = s.find_consumer(consumer);
    if (!cm) throw ScenarioError("no models for consumer " + consumer);
    return *cm;
}

}  // namespace

DecisionReport evaluate(const Scenario& s, const AgentId& consumer, const Operators& ops) {
    const ConsumerModel& cm = consumer_or_throw(s, consumer);
    const MessageDistribution x = message_distribution(s, consumer, ops);
    double delta = std::numeric_limits<double>::quiet_NaN();
    if (cm.x_override) {
        try {
            delta = effective_disclosure(s, consumer, ops);
        } catch (const ScenarioError&) {
            // Override supplied and no usable path; report the override alone.
        }
    } else {
        delta = effective_disclosure(s, consumer, ops);
    }
    return evaluate_with_x(cm, x, delta, cm.x_override.has_value());
}

DecisionReport evaluate(const Scenario& s, const AgentId& consumer) {
    return evaluate(s, consumer, operators_for(s));
}

ThresholdResult binary_threshold(const BinaryCase& bc) {
    if (!(bc.risk_high > bc.risk_low))
        throw ScenarioError("degenerate binary case: risk_high must exceed risk_low");
    ThresholdResult result;
    result.lhs = (bc.risk_high - bc.benefit) / (bc.risk_high - bc.risk_low);
    result.rhs = bc.u_m2 * bc.w_y0 + (1.0 - bc.u_m2) * bc.w_y1;
    result.verdict = (result.lhs <= result.rhs && result.rhs <= 1.0) ? Verdict::share
                                                                     : Verdict::withhold;
    result.benefit_covers_min_risk = bc.benefit >= bc.risk_low;
    return result;
}

BalanceResult balance_q2(double q1, std::pair<double, double> w1,
                         std::pair<double, double> w2) {
    const double denom = w2.first - w2.second;
    if (denom == 0.0)
        throw ScenarioError(
            "degenerate balance: consumer 2's impact does not depend on its inference "
            "(w2 entries are equal)");
    const double q2 = q1 * (w1.first - w1.second) / denom + (w1.second - w2.second) / denom;
    return {q2, q2 >= 0.0 && q2 <= 1.0};
}

std::vector<SweepRow> sweep(const Scenario& s, const AgentId& consumer,
                            std::span<const double> grid, const Operators&) {
    // The grid degree replaces propagation entirely, so the operator pair
    // is accepted only for signature symmetry with evaluate().
    const ConsumerModel& cm = consumer_or_throw(s, consumer);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double delta : grid) {
        if (!(delta >= 0.0 && delta <= 1.0))
            throw ScenarioError("sweep degree outside [0,1]");
        const Message& received = s.message_space.disclose(s.original_message, delta);
        std::vector<double> x(s.message_space.size(), 0.0);
        x[*s.message_space.index_of(received.id)] = 1.0;
        rows.push_back({delta, evaluate_with_x(cm, {consumer, std::move(x)}, delta, false)});
    }
    return rows;
}

std::vector<SweepRow> sweep(const Scenario& s, const AgentId& consumer,
                            std::span<const double> grid) {
    return sweep(s, consumer, grid, operators_for(s));
}

}  // namespace disclose
