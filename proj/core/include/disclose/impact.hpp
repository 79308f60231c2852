#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "disclose/propagation.hpp"

namespace disclose {

struct ImpactDistribution {
    AgentId consumer;
    std::vector<double> probs;  // over impact outcomes; sums to 1

    friend bool operator==(const ImpactDistribution&, const ImpactDistribution&) = default;
};

/// z~ = Z (I x). Column-stochastic inputs make the output a distribution.
/// Throws ScenarioError on dimension mismatches.
ImpactDistribution impact_distribution(const Matrix& impact, const Matrix& inference,
                                       const MessageDistribution& x);

/// Dot product of outcome values with the impact distribution.
double expected_impact(std::span<const double> values, const ImpactDistribution& dist);

enum class Verdict { share, withhold };
const char* to_string(Verdict v);

struct DecisionReport {
    AgentId consumer;
    double delta = 1.0;  // effective disclosure degree behind x
    bool x_overridden = false;
    double expected_benefit = 0.0;
    double expected_risk = 0.0;
    double expected_net = 0.0;  // expected_benefit - expected_risk
    Verdict verdict = Verdict::withhold;
    /// Binary-case threshold diagnostics, filled when the consumer has a
    /// fixed benefit and exactly two distinct risk levels:
    /// lhs = (r_B - B) / (r_B - r_A), rhs = Pr(low-risk outcome).
    std::optional<double> threshold_lhs;
    std::optional<double> threshold_rhs;
};

/// Full pipeline for one consumer: E[B] = b' Z_B I x, E[R] = r' Z_R I x,
/// E[C] = E[B] - E[R], share iff E[C] >= 0.
DecisionReport evaluate(const Scenario& s, const AgentId& consumer, const Operators& ops);
DecisionReport evaluate(const Scenario& s, const AgentId& consumer);

/// The binary worked case: two inferences, two risk levels, fixed benefit.
struct BinaryCase {
    double u_m1 = 0.0;       // Pr(y0 | m1)
    double u_m2 = 0.0;       // Pr(y0 | m2), m2 being the delivered message
    double w_y0 = 0.0;       // Pr(r_A | y0)
    double w_y1 = 0.0;       // Pr(r_A | y1)
    double risk_low = 0.0;   // r_A
    double risk_high = 0.0;  // r_B; must exceed risk_low
    double benefit = 0.0;    // fixed benefit
};

struct ThresholdResult {
    double lhs = 0.0;
    double rhs = 0.0;
    Verdict verdict = Verdict::withhold;
    /// Sharing can only pay off when the benefit covers the lowest risk level.
    bool benefit_covers_min_risk = false;
};

/// Closed-form share test: share iff
/// (r_B - benefit)/(r_B - r_A) <= u_m2 w_y0 + (1 - u_m2) w_y1 <= 1.
/// Throws ScenarioError when risk_high <= risk_low.
ThresholdResult binary_threshold(const BinaryCase& bc);

struct BalanceResult {
    double q2 = 0.0;
    bool feasible = false;  // q2 in [0,1]
};

/// Solves q1 (w1_0 - w1_1) + w1_1 = q2 (w2_0 - w2_1) + w2_1 for the
/// inference probability q2 that equalizes the two expected impacts.
/// Out-of-range q2 is reported as infeasible, not an error; a zero
/// denominator (w2 first == second) throws ScenarioError.
BalanceResult balance_q2(double q1, std::pair<double, double> w1,
                         std::pair<double, double> w2);

struct SweepRow {
    double delta = 0.0;
    DecisionReport report;
};

/// evaluate() at each grid degree, with propagation replaced by the given
/// degree (x_override is ignored here; the sweep is what-if by design).
std::vector<SweepRow> sweep(const Scenario& s, const AgentId& consumer,
                            std::span<const double> grid, const Operators& ops);
std::vector<SweepRow> sweep(const Scenario& s, const AgentId& consumer,
                            std::span<const double> grid);

}  // namespace disclose
