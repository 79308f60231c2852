#include "disclose/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "disclose/errors.hpp"

namespace disclose {

std::optional<std::size_t> MessageSpace::index_of(const MessageId& id) const {
    for (std::size_t i = 0; i < messages.size(); ++i)
        if (messages[i].id == id) return i;
    return std::nullopt;
}

const Message& MessageSpace::disclose(const MessageId& id, double degree) const {
    const auto idx = index_of(id);
    if (!idx) throw ScenarioError("unknown message id: " + id);
    const double budget = degree * messages[*idx].info_level;
    // Messages are ordered by strictly decreasing info level, so the first
    // entry within budget is the most informative one.
    for (const Message& m : messages)
        if (m.info_level <= budget) return m;
    return messages.back();
}

const ConsumerModel* Scenario::find_consumer(const AgentId& id) const {
    for (const auto& c : consumers)
        if (c.consumer == id) return &c;
    return nullptr;
}

namespace {

class Checker {
public:
    explicit Checker(double tol) : tol_(tol) {}

    void error(std::string location, std::string description) {
        findings_.push_back({Severity::error, std::move(location), std::move(description)});
    }
    void warning(std::string location, std::string description) {
        findings_.push_back({Severity::warning, std::move(location), std::move(description)});
    }

    void check_stochastic(const Matrix& m, const std::string& location) {
        if (m.empty()) {
            error(location, "matrix is empty");
            return;
        }
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) {
                const double v = m(r, c);
                if (!(v >= 0.0 && v <= 1.0)) {
                    std::ostringstream os;
                    os << "entry (" << r << "," << c << ") = " << v << " outside [0,1]";
                    error(location, os.str());
                }
            }
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double s = column_sum(m, c);
            if (std::abs(s - 1.0) > tol_) {
                std::ostringstream os;
                os << "column " << c << " sums to " << s << ", expected 1 within " << tol_;
                error(location, os.str());
            }
        }
    }

    ValidationReport report() && {
        const bool ok = std::none_of(findings_.begin(), findings_.end(), [](const Finding& f) {
            return f.severity == Severity::error;
        });
        return {ok, std::move(findings_)};
    }

private:
    double tol_;
    std::vector<Finding> findings_;
};

std::set<AgentId> reachable_from(const Scenario& s, const AgentId& start) {
    std::unordered_map<AgentId, std::vector<AgentId>> adj;
    for (const auto& e : s.edges) adj[e.from].push_back(e.to);
    std::set<AgentId> seen;
    std::deque<AgentId> frontier{start};
    while (!frontier.empty()) {
        AgentId a = frontier.front();
        frontier.pop_front();
        for (const auto& next : adj[a])
            if (seen.insert(next).second) frontier.push_back(next);
    }
    return seen;
}

}  // namespace

ValidationReport validate_scenario(const Scenario& s, double tol) {
    Checker chk(tol);

    std::unordered_set<AgentId> agent_set;
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
        const auto& a = s.agents[i];
        const std::string loc = "agents[" + std::to_string(i) + "]";
        if (a.empty()) chk.error(loc, "agent id must be non-empty");
        if (!agent_set.insert(a).second) chk.error(loc, "duplicate agent id: " + a);
    }
    if (s.agents.empty()) chk.error("agents", "agent list is empty");

    // Message space ordering: strictly decreasing info levels from 1 to 0.
    const auto& msgs = s.message_space.messages;
    if (msgs.size() < 2) {
        chk.error("messages", "message space needs at least the original and the no-message entry");
    } else {
        if (msgs.front().info_level != 1.0)
            chk.error("messages[0]", "first message must carry info_level 1");
        if (msgs.back().info_level != 0.0)
            chk.error("messages[" + std::to_string(msgs.size() - 1) + "]",
                      "last message must be the no-message entry with info_level 0");
    }
    std::unordered_set<MessageId> message_ids;
    for (std::size_t i = 0; i < msgs.size(); ++i) {
        const std::string loc = "messages[" + std::to_string(i) + "]";
        const double lv = msgs[i].info_level;
        if (!(lv >= 0.0 && lv <= 1.0)) chk.error(loc, "info_level outside [0,1]");
        if (i > 0 && !(lv < msgs[i - 1].info_level))
            chk.error(loc, "info_levels must be strictly decreasing");
        if (msgs[i].id.empty()) chk.error(loc, "message id must be non-empty");
        if (!message_ids.insert(msgs[i].id).second)
            chk.error(loc, "duplicate message id: " + msgs[i].id);
    }

    std::set<std::pair<AgentId, AgentId>> edge_keys;
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
        const auto& e = s.edges[i];
        const std::string loc = "edges[" + std::to_string(i) + "]";
        if (!agent_set.count(e.from)) chk.error(loc, "unknown agent: " + e.from);
        if (!agent_set.count(e.to)) chk.error(loc, "unknown agent: " + e.to);
        if (e.from == e.to) chk.error(loc, "self-loop on " + e.from);
        if (!(e.forward_prob >= 0.0 && e.forward_prob <= 1.0))
            chk.error(loc, "forward_prob outside [0,1]");
        if (!(e.disclosure >= 0.0 && e.disclosure <= 1.0))
            chk.error(loc, "disclosure outside [0,1]");
        if (!edge_keys.insert({e.from, e.to}).second)
            chk.error(loc, "duplicate edge " + e.from + " -> " + e.to);
    }

    if (!agent_set.count(s.producer))
        chk.error("producer", "producer " + s.producer + " is not in the agent list");
    const auto orig = s.message_space.index_of(s.original_message);
    if (!orig) {
        chk.error("original_message", "message " + s.original_message + " is not in the message space");
    } else if (!msgs.empty() && *orig != 0) {
        chk.error("original_message", "original message must be the most informative entry");
    }

    if (s.benefit_scalar && !std::isfinite(*s.benefit_scalar))
        chk.error("benefit_scalar", "must be finite");

    // Names accepted by serial_op_by_name / parallel_op_by_name.
    if (s.serial_op != "product")
        chk.error("operators.serial", "unknown serial operator: " + s.serial_op);
    if (s.parallel_op != "min")
        chk.error("operators.parallel", "unknown parallel operator: " + s.parallel_op);

    const auto reachable = reachable_from(s, s.producer);
    std::unordered_set<AgentId> modeled;
    for (const auto& cm : s.consumers) {
        const std::string base = "consumers." + cm.consumer;
        if (!agent_set.count(cm.consumer)) chk.error(base, "unknown agent: " + cm.consumer);
        if (!modeled.insert(cm.consumer).second)
            chk.error(base, "duplicate consumer model for " + cm.consumer);
        if (cm.consumer == s.producer)
            chk.error(base, "producer cannot be modeled as a consumer");
        if (!reachable.count(cm.consumer))
            chk.error(base, "consumer unreachable from producer " + s.producer);

        const Matrix& inf = cm.inference.matrix;
        chk.check_stochastic(inf, base + ".inference");
        if (inf.cols() != s.message_space.size())
            chk.error(base + ".inference",
                      "expected one column per message (" + std::to_string(s.message_space.size()) +
                          "), got " + std::to_string(inf.cols()));
        if (!cm.inference.labels.empty() && cm.inference.labels.size() != inf.rows())
            chk.error(base + ".inference", "label count does not match row count");

        const std::size_t n = inf.rows();
        const auto check_impact_side = [&](const Matrix& z, const std::vector<double>& values,
                                           const std::string& side) {
            chk.check_stochastic(z, base + "." + side);
            if (z.cols() != n)
                chk.error(base + "." + side,
                          "expected one column per inference (" + std::to_string(n) + "), got " +
                              std::to_string(z.cols()));
            if (values.size() != z.rows())
                chk.error(base + "." + side + ".values",
                          "expected " + std::to_string(z.rows()) + " values, got " +
                              std::to_string(values.size()));
            for (double v : values)
                if (!std::isfinite(v)) chk.error(base + "." + side + ".values", "non-finite value");
        };
        check_impact_side(cm.impact.benefit_matrix, cm.impact.benefit_values, "benefit");
        check_impact_side(cm.impact.risk_matrix, cm.impact.risk_values, "risk");
        if (cm.impact.shared_impact && cm.impact.benefit_matrix != cm.impact.risk_matrix)
            chk.error(base + ".impact", "shared impact declared but the tables differ");

        if (cm.x_override) {
            const auto& x = *cm.x_override;
            if (x.size() != s.message_space.size())
                chk.error(base + ".x_override", "length must equal the message space size");
            double sum = 0.0;
            bool nonneg = true;
            for (double v : x) {
                sum += v;
                nonneg = nonneg && v >= 0.0;
            }
            if (!nonneg) chk.error(base + ".x_override", "entries must be nonnegative");
            else if (std::abs(sum - 1.0) > tol)
                chk.error(base + ".x_override", "entries must sum to 1");
        }
    }

    return std::move(chk).report();
}

}  // namespace disclose
