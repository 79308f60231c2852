#pragma once

#include <optional>
#include <string>
#include <vector>

#include "disclose/continuous.hpp"
#include "disclose/matrix.hpp"

namespace disclose {

using AgentId = std::string;
using MessageId = std::string;

struct Message {
    MessageId id;
    std::string label;
    /// How much of the original content this message carries:
    /// 1 = the full original message, 0 = nothing.
    double info_level = 0.0;

    friend bool operator==(const Message&, const Message&) = default;
};

/// Ordered message space. Info levels are strictly decreasing from the
/// original message (level 1) down to the distinguished no-message entry
/// (level 0), which must always be present.
struct MessageSpace {
    std::vector<Message> messages;

    std::size_t size() const { return messages.size(); }
    std::optional<std::size_t> index_of(const MessageId& id) const;

    /// The most informative message whose info level does not exceed
    /// degree * info_level(m). Degree 1 returns m itself, degree 0 the
    /// no-message entry. Throws ScenarioError for an unknown id.
    const Message& disclose(const MessageId& id, double degree) const;

    friend bool operator==(const MessageSpace&, const MessageSpace&) = default;
};

struct DisclosureEdge {
    AgentId from;
    AgentId to;
    /// Probability that `from` forwards what it holds to `to`.
    double forward_prob = 1.0;
    /// Degree of disclosure used on this link, in [0,1].
    double disclosure = 1.0;

    friend bool operator==(const DisclosureEdge&, const DisclosureEdge&) = default;
};

/// Column-stochastic table I: entry (i,j) = Pr(inference i | message j).
struct InferenceModel {
    std::vector<std::string> labels;  // inference space, size N
    Matrix matrix;                    // N x M, M = message space size

    friend bool operator==(const InferenceModel&, const InferenceModel&) = default;
};

/// Benefit and risk outcome tables, column-stochastic over inferences,
/// plus the monetary value attached to each outcome row. A scenario may
/// declare one shared outcome table for both sides (shared_impact); the
/// engine then computes the impact distribution once.
struct ImpactModel {
    Matrix benefit_matrix;              // K_B x N
    Matrix risk_matrix;                 // K_R x N
    std::vector<double> benefit_values; // length K_B
    std::vector<double> risk_values;    // length K_R
    bool shared_impact = false;         // benefit_matrix == risk_matrix by declaration

    friend bool operator==(const ImpactModel&, const ImpactModel&) = default;
};

/// Optional continuous-density counterpart of the discrete tables.
struct ContinuousModel {
    int grid_n = kDefaultGridN;
    FamilySpec inference;  // f_I(y; x)
    FamilySpec impact;     // f_Z(z; y)

    friend bool operator==(const ContinuousModel&, const ContinuousModel&) = default;
};

struct ConsumerModel {
    AgentId consumer;
    InferenceModel inference;
    ImpactModel impact;
    /// Explicit received-message distribution; bypasses propagation.
    std::optional<std::vector<double>> x_override;
    std::optional<ContinuousModel> continuous;

    friend bool operator==(const ConsumerModel&, const ConsumerModel&) = default;
};

struct Scenario {
    std::vector<AgentId> agents;
    std::vector<DisclosureEdge> edges;
    MessageSpace message_space;
    AgentId producer;
    MessageId original_message;
    std::vector<ConsumerModel> consumers;
    /// Fixed-benefit shorthand: consumers without an explicit benefit model
    /// get a one-row all-ones benefit table worth this amount.
    std::optional<double> benefit_scalar;
    std::string serial_op = "product";
    std::string parallel_op = "min";

    const ConsumerModel* find_consumer(const AgentId& id) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Severity { error, warning };

struct Finding {
    Severity severity = Severity::error;
    std::string location;
    std::string description;

    friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Finding> findings;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

inline constexpr double kStochasticTol = 1e-9;

/// Reports every violated invariant; never throws. ok is true iff there
/// is no error-severity finding.
ValidationReport validate_scenario(const Scenario& s, double tol = kStochasticTol);

}  // namespace disclose
