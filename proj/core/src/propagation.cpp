#include "disclose/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "disclose/errors.hpp"

namespace disclose {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

const SerialOp& serial_product() {
    static const SerialOp op{
        "product",
        [](const EdgeWeight& a, const EdgeWeight& b) {
            return (a.forward_prob * a.disclosure) * (b.forward_prob * b.disclosure);
        },
    };
    return op;
}

const ParallelOp& parallel_min() {
    static const ParallelOp op{
        "min",
        [](double a, double b) { return std::min(a, b); },
    };
    return op;
}

SerialOp serial_op_by_name(const std::string& name) {
    if (name == "product") return serial_product();
    throw ScenarioError("unknown serial operator: " + name);
}

ParallelOp parallel_op_by_name(const std::string& name) {
    if (name == "min") return parallel_min();
    throw ScenarioError("unknown parallel operator: " + name);
}

Operators operators_for(const Scenario& s) {
    return {serial_op_by_name(s.serial_op), parallel_op_by_name(s.parallel_op)};
}

double combine_serial(const EdgeWeight& a, const EdgeWeight& b, const SerialOp& op) {
    return clamp01(op.combine(a, b));
}

double combine_parallel(double a, double b, const ParallelOp& op) {
    return clamp01(op.fuse(a, b));
}

std::vector<std::vector<AgentId>> enumerate_simple_paths(const Scenario& s,
                                                         const AgentId& target,
                                                         std::size_t cap) {
    // Sorted adjacency gives lexicographic path order without a post-sort.
    std::map<AgentId, std::vector<AgentId>> adj;
    for (const auto& e : s.edges) adj[e.from].push_back(e.to);
    for (auto& [_, outs] : adj) std::sort(outs.begin(), outs.end());

    std::vector<std::vector<AgentId>> paths;
    std::vector<AgentId> current{s.producer};
    std::unordered_set<AgentId> visited{s.producer};

    auto dfs = [&](auto&& self, const AgentId& at) -> void {
        if (at == target) {
            if (paths.size() >= cap)
                throw ScenarioError("graph too dense: more than " + std::to_string(cap) +
                                    " simple paths to " + target);
            paths.push_back(current);
            return;
        }
        auto it = adj.find(at);
        if (it == adj.end()) return;
        for (const AgentId& next : it->second) {
            if (visited.count(next)) continue;
            visited.insert(next);
            current.push_back(next);
            self(self, next);
            current.pop_back();
            visited.erase(next);
        }
    };
    dfs(dfs, s.producer);
    return paths;
}

namespace {

const DisclosureEdge& edge_between(const Scenario& s, const AgentId& from, const AgentId& to) {
    for (const auto& e : s.edges)
        if (e.from == from && e.to == to) return e;
    throw ScenarioError("no edge " + from + " -> " + to);
}

double fold_path(const Scenario& s, const std::vector<AgentId>& path, const SerialOp& op) {
    // The fold state acts as the left operand with forwarding already
    // realized, so it enters the operator as a certain hop.
    double acc = 1.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& e = edge_between(s, path[i], path[i + 1]);
        acc = combine_serial({1.0, acc}, {e.forward_prob, e.disclosure}, op);
    }
    return acc;
}

}  // namespace

PropagationDetail propagation_detail(const Scenario& s, const AgentId& consumer,
                                     const Operators& ops, std::size_t cap) {
    PropagationDetail detail;
    detail.paths = enumerate_simple_paths(s, consumer, cap);
    if (detail.paths.empty())
        throw ScenarioError("no path from " + s.producer + " to " + consumer);

    double min_first_hop = 1.0;
    for (const auto& path : detail.paths) {
        const double degree = fold_path(s, path, ops.serial);
        const double first_hop = edge_between(s, path[0], path[1]).disclosure;
        if (degree > first_hop + 1e-12)
            throw std::logic_error("serial operator '" + ops.serial.name +
                                   "' exceeds the first-hop disclosure bound");
        detail.path_degrees.push_back(degree);
        min_first_hop = std::min(min_first_hop, first_hop);
    }

    double fused = detail.path_degrees[0];
    for (std::size_t i = 1; i < detail.path_degrees.size(); ++i)
        fused = combine_parallel(fused, detail.path_degrees[i], ops.parallel);
    if (fused > min_first_hop + 1e-12)
        throw std::logic_error("parallel operator '" + ops.parallel.name +
                               "' exceeds the minimum first-hop disclosure bound");
    detail.fused = fused;
    return detail;
}

double effective_disclosure(const Scenario& s, const AgentId& consumer,
                            const Operators& ops, std::size_t cap) {
    return propagation_detail(s, consumer, ops, cap).fused;
}

MessageDistribution message_distribution(const Scenario& s, const AgentId& consumer,
                                         const Operators& ops) {
    const ConsumerModel* cm = s.find_consumer(consumer);
    if (cm && cm->x_override) {
        const auto& x = *cm->x_override;
        if (x.size() != s.message_space.size())
            throw ScenarioError("x_override for " + consumer +
                                " does not match the message space size");
        double sum = 0.0;
        for (double v : x) {
            if (v < 0.0) throw ScenarioError("x_override for " + consumer + " has negative entries");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kStochasticTol)
            throw ScenarioError("x_override for " + consumer + " does not sum to 1");
        return {consumer, x};
    }

    const double degree = effective_disclosure(s, consumer, ops);
    const Message& received = s.message_space.disclose(s.original_message, degree);
    std::vector<double> x(s.message_space.size(), 0.0);
    x[*s.message_space.index_of(received.id)] = 1.0;
    return {consumer, std::move(x)};
}

}  // namespace disclose
