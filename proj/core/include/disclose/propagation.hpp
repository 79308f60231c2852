#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "disclose/scenario.hpp"

namespace disclose {

struct EdgeWeight {
    double forward_prob = 1.0;
    double disclosure = 1.0;
};

/// Combines disclosure along consecutive hops. The combined degree may
/// never exceed the first hop's disclosure.
struct SerialOp {
    std::string name;
    std::function<double(const EdgeWeight&, const EdgeWeight&)> combine;
};

/// Fuses disclosure arriving over alternative paths. Must be commutative
/// and associative; the fused degree may never exceed the smallest
/// first-hop disclosure among the fused paths.
struct ParallelOp {
    std::string name;
    std::function<double(double, double)> fuse;
};

const SerialOp& serial_product();
const ParallelOp& parallel_min();

/// Lookup by the names accepted in scenario files and CLI flags
/// ("product", "min"). Throws ScenarioError for unknown names.
SerialOp serial_op_by_name(const std::string& name);
ParallelOp parallel_op_by_name(const std::string& name);

struct Operators {
    SerialOp serial = serial_product();
    ParallelOp parallel = parallel_min();
};

/// The operator pair named by the scenario file.
Operators operators_for(const Scenario& s);

double combine_serial(const EdgeWeight& a, const EdgeWeight& b,
                      const SerialOp& op = serial_product());
double combine_parallel(double a, double b, const ParallelOp& op = parallel_min());

inline constexpr std::size_t kDefaultPathCap = 10'000;

/// All simple paths producer -> target, as agent sequences in
/// lexicographic order. Throws ScenarioError("graph too dense") once the
/// count exceeds cap.
std::vector<std::vector<AgentId>> enumerate_simple_paths(const Scenario& s,
                                                         const AgentId& target,
                                                         std::size_t cap = kDefaultPathCap);

struct PropagationDetail {
    std::vector<std::vector<AgentId>> paths;
    std::vector<double> path_degrees;  // serial fold of each path
    double fused = 0.0;                // parallel fusion across paths
};

/// Per-path degrees and their fusion. Rejects operators that violate the
/// disclosure bounds on this graph (result above a first-hop degree).
PropagationDetail propagation_detail(const Scenario& s, const AgentId& consumer,
                                     const Operators& ops = {},
                                     std::size_t cap = kDefaultPathCap);

/// The single degree of disclosure equivalent to all producer->consumer
/// routes. Throws ScenarioError("no path") when the consumer is unreachable.
double effective_disclosure(const Scenario& s, const AgentId& consumer,
                            const Operators& ops = {},
                            std::size_t cap = kDefaultPathCap);

struct MessageDistribution {
    AgentId consumer;
    std::vector<double> x;  // over the message space; sums to 1

    friend bool operator==(const MessageDistribution&, const MessageDistribution&) = default;
};

/// Distribution over the messages the consumer receives: a unit vector at
/// the degraded message in deterministic mode, or the consumer's explicit
/// x_override (checked for normalization) when one is supplied.
MessageDistribution message_distribution(const Scenario& s, const AgentId& consumer,
                                         const Operators& ops = {});

}  // namespace disclose
