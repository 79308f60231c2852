#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "disclose/errors.hpp"
#include "disclose/propagation.hpp"
#include "disclose/scenario_io.hpp"
#include "test_util.hpp"

using namespace disclose;

namespace {

Scenario graph_only(std::vector<AgentId> agents, std::vector<DisclosureEdge> edges) {
    Scenario s;
    s.agents = std::move(agents);
    s.edges = std::move(edges);
    s.message_space.messages = {{"m_full", "", 1.0}, {"m_none", "", 0.0}};
    s.producer = s.agents.front();
    s.original_message = "m_full";
    return s;
}

/// Independent oracle: exhaustive recursion over the raw edge list with an
/// explicit product fold and min fusion, sharing no code with the library.
struct BruteForce {
    const Scenario& s;
    double best = 2.0;
    bool found = false;

    void explore(const AgentId& at, const AgentId& target, std::set<AgentId>& seen,
                 double degree) {
        if (at == target) {
            best = std::min(best, degree);
            found = true;
            return;
        }
        for (const auto& e : s.edges) {
            if (e.from != at || seen.count(e.to)) continue;
            seen.insert(e.to);
            explore(e.to, target, seen, degree * e.forward_prob * e.disclosure);
            seen.erase(e.to);
        }
    }

    static double run(const Scenario& s, const AgentId& target) {
        BruteForce b{s};
        std::set<AgentId> seen{s.producer};
        b.explore(s.producer, target, seen, 1.0);
        REQUIRE(b.found);
        return b.best;
    }
};

}  // namespace

TEST_CASE("serial combination multiplies hops") {
    CHECK(combine_serial({1.0, 0.7}, {1.0, 0.5}) == doctest::Approx(0.35).epsilon(1e-12));
    for (double x : {0.0, 0.3, 0.99, 1.0})
        CHECK(combine_serial({1.0, 1.0}, {1.0, x}) == doctest::Approx(x).epsilon(1e-15));
    CHECK(combine_serial({0.4, 0.0}, {0.8, 0.6}) == 0.0);
}

TEST_CASE("parallel combination takes the minimum") {
    CHECK(combine_parallel(0.81, 0.25) == 0.25);
    for (double x : {0.0, 0.5, 1.0}) {
        CHECK(combine_parallel(x, x) == x);
        CHECK(combine_parallel(0.0, x) == 0.0);
    }
}

TEST_CASE("two-hop chain reduces to 0.35") {
    const Scenario s = graph_only({"a1", "a2", "a3"}, {{"a1", "a2", 1.0, 0.7},
                                                       {"a2", "a3", 1.0, 0.5}});
    CHECK(effective_disclosure(s, "a3") == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("a single direct edge passes its degree through") {
    for (double x : {0.0, 0.25, 1.0}) {
        const Scenario s = graph_only({"p", "c"}, {{"p", "c", 1.0, x}});
        CHECK(effective_disclosure(s, "c") == doctest::Approx(x).epsilon(1e-15));
    }
}

TEST_CASE("diamond fuses to min of the path products") {
    const Scenario s = graph_only({"a1", "a2", "a3", "a4"}, {{"a1", "a2", 1.0, 0.9},
                                                             {"a2", "a4", 1.0, 0.9},
                                                             {"a1", "a3", 1.0, 0.5},
                                                             {"a3", "a4", 1.0, 0.5}});
    const double got = effective_disclosure(s, "a4");
    CHECK(got == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(got == doctest::Approx(BruteForce::run(s, "a4")).epsilon(1e-12));

    const auto detail = propagation_detail(s, "a4");
    REQUIRE(detail.paths.size() == 2);
    CHECK(detail.path_degrees[0] == doctest::Approx(0.81));
    CHECK(detail.path_degrees[1] == doctest::Approx(0.25));
}

TEST_CASE("unreachable consumers and dense graphs raise input errors") {
    const Scenario s = graph_only({"a1", "a2", "a3"}, {{"a2", "a3", 1.0, 0.5}});
    CHECK_THROWS_WITH_AS(effective_disclosure(s, "a3"), doctest::Contains("no path"),
                         ScenarioError);

    // Complete digraph on 9 nodes: 5040+ simple paths between two nodes at
    // cap 10, far over the tiny cap used here.
    std::vector<AgentId> agents;
    for (int i = 0; i < 9; ++i) agents.push_back("n" + std::to_string(i));
    std::vector<DisclosureEdge> edges;
    for (const auto& a : agents)
        for (const auto& b : agents)
            if (a != b) edges.push_back({a, b, 1.0, 0.9});
    const Scenario dense = graph_only(agents, edges);
    CHECK_THROWS_WITH_AS(effective_disclosure(dense, "n8", Operators{}, 10),
                         doctest::Contains("graph too dense"), ScenarioError);
}

TEST_CASE("effective disclosure never exceeds contributing first-hop degrees") {
    testutil::Gen gen(99);
    int graphs = 0;
    while (graphs < 1000) {
        const Scenario s = testutil::random_scenario(gen, /*certain_forwarding=*/false);
        const AgentId target = s.consumers.front().consumer;
        const auto detail = propagation_detail(s, target);
        ++graphs;

        double min_first_hop = 1.0;
        for (std::size_t p = 0; p < detail.paths.size(); ++p) {
            double first = 0.0;
            for (const auto& e : s.edges)
                if (e.from == detail.paths[p][0] && e.to == detail.paths[p][1]) first = e.disclosure;
            CHECK(detail.path_degrees[p] <= first + 1e-12);
            min_first_hop = std::min(min_first_hop, first);
        }
        CHECK(detail.fused <= min_first_hop + 1e-12);
        CHECK(detail.fused >= 0.0);
        CHECK(detail.fused <= 1.0);
        CHECK(detail.fused == doctest::Approx(BruteForce::run(s, target)).epsilon(1e-12));
    }
}

TEST_CASE("fusion is independent of edge declaration order") {
    testutil::Gen gen(123);
    for (int i = 0; i < 200; ++i) {
        Scenario s = testutil::random_scenario(gen, false);
        const AgentId target = s.consumers.front().consumer;
        const double base = effective_disclosure(s, target);
        for (int shuffle = 0; shuffle < 4; ++shuffle) {
            for (std::size_t k = s.edges.size(); k > 1; --k)
                std::swap(s.edges[k - 1], s.edges[gen.index(k)]);
            CHECK(effective_disclosure(s, target) == base);
        }
    }
}

TEST_CASE("disclosure degradation is monotone in the degree") {
    testutil::Gen gen(5);
    for (int i = 0; i < 300; ++i) {
        const Scenario s = testutil::random_scenario(gen);
        const auto& space = s.message_space;
        const double d1 = gen.uniform();
        const double d2 = gen.uniform();
        const double lo = std::min(d1, d2);
        const double hi = std::max(d1, d2);
        CHECK(space.disclose(s.original_message, lo).info_level <=
              space.disclose(s.original_message, hi).info_level);
    }
}

TEST_CASE("message distribution is a unit vector in deterministic mode") {
    const Scenario s = read_scenario_file(testutil::scenario_path("james_alec.json"));
    for (const auto& consumer : {AgentId("James"), AgentId("Alec")}) {
        const MessageDistribution dist = message_distribution(s, consumer);
        REQUIRE(dist.x.size() == 3);
        CHECK(dist.x[0] == 0.0);
        CHECK(dist.x[1] == 1.0);  // the degraded message
        CHECK(dist.x[2] == 0.0);
    }
}

TEST_CASE("full disclosure delivers the original message") {
    Scenario s = read_scenario_file(testutil::scenario_path("james_alec.json"));
    for (auto& e : s.edges) e.disclosure = 1.0;
    const MessageDistribution dist = message_distribution(s, "James");
    CHECK(dist.x[0] == 1.0);
}

TEST_CASE("an explicit x_override is passed through verbatim") {
    Scenario s = read_scenario_file(testutil::scenario_path("james_alec.json"));
    s.consumers[0].x_override = std::vector<double>{0.3, 0.7, 0.0};
    const MessageDistribution dist = message_distribution(s, "James");
    CHECK(dist.x == std::vector<double>{0.3, 0.7, 0.0});

    s.consumers[0].x_override = std::vector<double>{0.3, 0.3, 0.0};
    CHECK_THROWS_AS(message_distribution(s, "James"), ScenarioError);
}

TEST_CASE("message distributions sum to one over random scenarios") {
    testutil::Gen gen(31);
    for (int i = 0; i < 300; ++i) {
        const Scenario s = testutil::random_scenario(gen, false);
        const MessageDistribution dist = message_distribution(s, s.consumers.front().consumer);
        double sum = 0.0;
        int ones = 0;
        for (double v : dist.x) {
            sum += v;
            ones += v == 1.0;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(ones == 1);  // deterministic mode: a unit vector
    }
}

TEST_CASE("unknown operator names are input errors") {
    CHECK_THROWS_AS(serial_op_by_name("sum"), ScenarioError);
    CHECK_THROWS_AS(parallel_op_by_name("max"), ScenarioError);
    CHECK(serial_op_by_name("product").name == "product");
    CHECK(parallel_op_by_name("min").name == "min");
}

TEST_CASE("a bound-violating custom operator is rejected at run time") {
    const Scenario s = graph_only({"a1", "a2", "a3"}, {{"a1", "a2", 1.0, 0.7},
                                                       {"a2", "a3", 1.0, 0.5}});
    Operators ops;
    ops.serial = SerialOp{"bad", [](const EdgeWeight&, const EdgeWeight&) { return 0.99; }};
    CHECK_THROWS_AS(effective_disclosure(s, "a3", ops), std::logic_error);
}
