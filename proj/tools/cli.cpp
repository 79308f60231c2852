#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "disclose/errors.hpp"
#include "disclose/impact.hpp"
#include "disclose/montecarlo.hpp"
#include "disclose/scenario_io.hpp"

namespace disclose::cli {

std::string csv_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string human_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

FamilySpec parse_family_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);

    FamilySpec out;
    std::vector<std::pair<std::string, double>> params;
    if (colon != std::string::npos) {
        std::istringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ScenarioError("family parameter '" + item + "' is not key=value");
            double value = 0.0;
            try {
                value = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw ScenarioError("family parameter '" + item + "' has a non-numeric value");
            }
            params.emplace_back(item.substr(0, eq), value);
        }
    }
    const auto get = [&](const std::string& key, std::optional<double> fallback) {
        for (const auto& [k, v] : params)
            if (k == key) return v;
        if (fallback) return *fallback;
        throw ScenarioError("family spec '" + spec + "' is missing " + key);
    };

    if (kind == "uniform") {
        out.kind = FamilySpec::Kind::uniform;
    } else if (kind == "triangular") {
        out.kind = FamilySpec::Kind::triangular;
        out.center0 = get("center0", std::nullopt);
        out.center1 = get("center1", 0.0);
        out.width = get("width", std::nullopt);
    } else if (kind == "beta") {
        out.kind = FamilySpec::Kind::beta;
        out.a0 = get("a0", std::nullopt);
        out.a1 = get("a1", 0.0);
        out.b0 = get("b0", std::nullopt);
        out.b1 = get("b1", 0.0);
    } else {
        throw ScenarioError("unknown family kind '" + kind +
                            "' (raw grids are only accepted in scenario files)");
    }
    return out;
}

namespace {

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) {
        if (path.empty()) return;
        file_.emplace(path, std::ios::binary | std::ios::trunc);
        if (!*file_) throw ScenarioError("cannot open CSV output file: " + path);
    }

    bool enabled() const { return file_.has_value(); }

    void row(const std::vector<std::string>& cells) {
        if (!file_) return;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) *file_ << ',';
            *file_ << cells[i];
        }
        *file_ << '\n';
    }

private:
    std::optional<std::ofstream> file_;
};

Operators resolve_operators(const Scenario& s, const CliInvocation& inv) {
    Operators ops = operators_for(s);
    if (inv.serial_op) ops.serial = serial_op_by_name(*inv.serial_op);
    if (inv.parallel_op) ops.parallel = parallel_op_by_name(*inv.parallel_op);
    return ops;
}

std::vector<AgentId> selected_consumers(const Scenario& s, const CliInvocation& inv,
                                        bool require_models = true) {
    if (inv.consumer) {
        if (require_models && !s.find_consumer(*inv.consumer))
            throw ScenarioError("no models for consumer " + *inv.consumer);
        if (!require_models &&
            std::find(s.agents.begin(), s.agents.end(), *inv.consumer) == s.agents.end())
            throw ScenarioError("unknown agent " + *inv.consumer);
        return {*inv.consumer};
    }
    std::vector<AgentId> all;
    for (const auto& cm : s.consumers) all.push_back(cm.consumer);
    if (all.empty()) throw ScenarioError("scenario has no modeled consumers");
    return all;
}

void print_digest(std::ostream& out, const CliInvocation& inv, const Scenario& s) {
    out << "scenario: " << inv.scenario_path << "\n"
        << "producer: " << s.producer << "   original message: " << s.original_message
        << "   messages: " << s.message_space.size() << "   agents: " << s.agents.size()
        << "\n";
}

void print_consumer_digest(std::ostream& out, const DecisionReport& r) {
    out << "consumer: " << r.consumer << "   effective delta: ";
    if (std::isnan(r.delta)) out << "n/a";
    else out << human_double(r.delta);
    if (r.x_overridden) out << " (x overridden in scenario)";
    out << "\n";
}

int cmd_validate(const CliInvocation& inv, std::ostream& out) {
    const Scenario s = read_scenario_file(inv.scenario_path);
    const ValidationReport report = validate_scenario(s, inv.tol);
    print_digest(out, inv, s);
    if (report.ok) {
        out << "OK: scenario is well-formed";
        if (!report.findings.empty()) out << " (" << report.findings.size() << " warning(s))";
        out << "\n";
        for (const auto& f : report.findings)
            out << "warning at " << f.location << ": " << f.description << "\n";
        return kExitOk;
    }
    out << "INVALID: " << report.findings.size() << " finding(s)\n" << format_findings(report);
    return kExitInputError;
}

int cmd_propagate(const CliInvocation& inv, std::ostream& out) {
    const Scenario s = load_scenario(inv.scenario_path, inv.tol);
    const Operators ops = resolve_operators(s, inv);
    CsvWriter csv(inv.csv_path);

    std::vector<std::string> header{"consumer", "delta", "received_message"};
    for (const auto& m : s.message_space.messages) header.push_back("x_" + m.id);
    csv.row(header);

    print_digest(out, inv, s);
    for (const AgentId& consumer : selected_consumers(s, inv, /*require_models=*/false)) {
        const ConsumerModel* cm = s.find_consumer(consumer);
        const MessageDistribution dist = message_distribution(s, consumer, ops);

        std::string received;
        double delta = std::numeric_limits<double>::quiet_NaN();
        out << "\nconsumer: " << consumer << "\n";
        if (cm && cm->x_override) {
            out << "  received distribution overridden in scenario file\n";
        } else {
            const PropagationDetail detail = propagation_detail(s, consumer, ops);
            delta = detail.fused;
            for (std::size_t i = 0; i < detail.paths.size(); ++i) {
                out << "  path:";
                for (const auto& a : detail.paths[i]) out << " " << a;
                out << "   degree " << human_double(detail.path_degrees[i]) << "\n";
            }
            received = s.message_space.disclose(s.original_message, delta).id;
            out << "  effective delta: " << human_double(delta) << "   received message: "
                << received << "\n";
        }
        out << "  x:";
        for (double v : dist.x) out << " " << human_double(v);
        out << "\n";

        std::vector<std::string> row{consumer, std::isnan(delta) ? "" : csv_double(delta),
                                     received};
        for (double v : dist.x) row.push_back(csv_double(v));
        csv.row(row);
    }
    return kExitOk;
}

std::vector<std::string> report_csv_row(const DecisionReport& r) {
    return {r.consumer,
            csv_double(r.delta),
            csv_double(r.expected_benefit),
            csv_double(r.expected_risk),
            csv_double(r.expected_net),
            to_string(r.verdict)};
}

void print_report(std::ostream& out, const DecisionReport& r) {
    print_consumer_digest(out, r);
    out << "  E[B] = " << human_double(r.expected_benefit)
        << "   E[R] = " << human_double(r.expected_risk)
        << "   E[C] = " << human_double(r.expected_net) << "\n";
    if (r.threshold_lhs) {
        out << "  threshold: lhs " << human_double(*r.threshold_lhs) << " vs rhs "
            << human_double(*r.threshold_rhs) << " -> "
            << (*r.threshold_lhs <= *r.threshold_rhs ? "share" : "withhold") << "\n";
    }
    out << "  verdict: " << to_string(r.verdict) << "\n";
}

int cmd_evaluate(const CliInvocation& inv, std::ostream& out, bool decide_style) {
    const Scenario s = load_scenario(inv.scenario_path, inv.tol);
    const Operators ops = resolve_operators(s, inv);
    CsvWriter csv(inv.csv_path);
    csv.row({"consumer", "delta", "EB", "ER", "EC", "verdict"});

    print_digest(out, inv, s);
    for (const AgentId& consumer : selected_consumers(s, inv)) {
        const DecisionReport r = evaluate(s, consumer, ops);
        out << "\n";
        if (decide_style) {
            print_consumer_digest(out, r);
            out << "  E[B] = " << human_double(r.expected_benefit)
                << "   E[R] = " << human_double(r.expected_risk)
                << "   E[C] = " << human_double(r.expected_net) << "\n";
            if (r.threshold_lhs) {
                out << "  binary threshold: " << human_double(*r.threshold_lhs) << " <= "
                    << human_double(*r.threshold_rhs) << " <= 1 is "
                    << (*r.threshold_lhs <= *r.threshold_rhs && *r.threshold_rhs <= 1.0
                            ? "satisfied"
                            : "violated")
                    << "\n";
            }
            out << "  decision: " << to_string(r.verdict) << "\n";
        } else {
            print_report(out, r);
        }
        csv.row(report_csv_row(r));
    }
    return kExitOk;
}

int cmd_balance(const CliInvocation& inv, std::ostream& out) {
    if (inv.w1.size() != 2 || inv.w2.size() != 2)
        throw ScenarioError("balance needs --w1 and --w2 as comma pairs, e.g. --w1 0.9,0.9");
    const BalanceResult result =
        balance_q2(inv.q1, {inv.w1[0], inv.w1[1]}, {inv.w2[0], inv.w2[1]});

    out << "balance: q1 = " << human_double(inv.q1) << ", w1 = (" << human_double(inv.w1[0])
        << ", " << human_double(inv.w1[1]) << "), w2 = (" << human_double(inv.w2[0]) << ", "
        << human_double(inv.w2[1]) << ")\n";
    out << "q2 = " << human_double(result.q2) << " -> "
        << (result.feasible ? "FEASIBLE" : "INFEASIBLE (outside [0,1])") << "\n";

    CsvWriter csv(inv.csv_path);
    csv.row({"q1", "w1_0", "w1_1", "w2_0", "w2_1", "q2", "feasible"});
    csv.row({csv_double(inv.q1), csv_double(inv.w1[0]), csv_double(inv.w1[1]),
             csv_double(inv.w2[0]), csv_double(inv.w2[1]), csv_double(result.q2),
             result.feasible ? "true" : "false"});
    return kExitOk;
}

int cmd_sweep(const CliInvocation& inv, std::ostream& out) {
    const Scenario s = load_scenario(inv.scenario_path, inv.tol);
    const Operators ops = resolve_operators(s, inv);
    if (!inv.consumer) throw ScenarioError("sweep needs --consumer");

    std::vector<double> grid = inv.grid;
    if (grid.empty()) {
        const int points = inv.grid_points > 0 ? inv.grid_points : 11;
        if (points < 2) throw ScenarioError("sweep needs at least 2 grid points");
        for (int i = 0; i < points; ++i)
            grid.push_back(static_cast<double>(i) / (points - 1));
    }

    const auto rows = sweep(s, *inv.consumer, grid, ops);

    print_digest(out, inv, s);
    out << "consumer: " << *inv.consumer << "\n";
    out << "  delta      E[B]          E[R]          E[C]          verdict\n";
    CsvWriter csv(inv.csv_path);
    csv.row({"consumer", "delta", "EB", "ER", "EC", "verdict"});
    for (const auto& row : rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "  %-9s  %-12s  %-12s  %-12s  %s\n",
                      human_double(row.delta).c_str(),
                      human_double(row.report.expected_benefit).c_str(),
                      human_double(row.report.expected_risk).c_str(),
                      human_double(row.report.expected_net).c_str(),
                      to_string(row.report.verdict));
        out << line;
        csv.row(report_csv_row(row.report));
    }
    return kExitOk;
}

int cmd_simulate(const CliInvocation& inv, std::ostream& out) {
    const Scenario s = load_scenario(inv.scenario_path, inv.tol);
    const Operators ops = resolve_operators(s, inv);
    if (!inv.consumer) throw ScenarioError("simulate needs --consumer");

    SimConfig cfg;
    cfg.trials = inv.trials;
    cfg.seed = inv.seed;
    cfg.consumer = *inv.consumer;

    print_digest(out, inv, s);
    CsvWriter csv(inv.csv_path);
    csv.row({"consumer", "trials", "seed", "estEB", "seEB", "estER", "seER", "estEC", "seEC"});

    if (inv.compare) {
        const OracleComparison cmp = oracle_compare(s, *inv.consumer, cfg, ops);
        print_consumer_digest(out, cmp.analytic);
        out << "  trials " << cfg.trials << ", seed " << cfg.seed << "\n";
        out << "  analytic: E[B] = " << human_double(cmp.analytic.expected_benefit)
            << "   E[R] = " << human_double(cmp.analytic.expected_risk)
            << "   E[C] = " << human_double(cmp.analytic.expected_net) << "\n";
        out << "  simulated: E[B] = " << human_double(cmp.sim.est_benefit) << " (se "
            << human_double(cmp.sim.stderr_benefit) << ")   E[R] = "
            << human_double(cmp.sim.est_risk) << " (se " << human_double(cmp.sim.stderr_risk)
            << ")   E[C] = " << human_double(cmp.sim.est_net) << " (se "
            << human_double(cmp.sim.stderr_net) << ")\n";
        out << "  z-scores: benefit " << human_double(cmp.z_benefit) << ", risk "
            << human_double(cmp.z_risk) << ", net " << human_double(cmp.z_net) << "\n";
        out << "  oracle: " << (cmp.pass ? "PASS" : "FAIL") << " (3 standard errors)\n";
        csv.row({*inv.consumer, std::to_string(cfg.trials), std::to_string(cfg.seed),
                 csv_double(cmp.sim.est_benefit), csv_double(cmp.sim.stderr_benefit),
                 csv_double(cmp.sim.est_risk), csv_double(cmp.sim.stderr_risk),
                 csv_double(cmp.sim.est_net), csv_double(cmp.sim.stderr_net)});
        return kExitOk;
    }

    const SimResult result = simulate(s, cfg, ops);
    out << "consumer: " << *inv.consumer << "   effective delta: ";
    const ConsumerModel* cm = s.find_consumer(*inv.consumer);
    if (cm && cm->x_override) out << "n/a (x overridden in scenario)";
    else out << human_double(effective_disclosure(s, *inv.consumer, ops));
    out << "   trials " << cfg.trials << ", seed " << cfg.seed << "\n";
    out << "  E[B] = " << human_double(result.est_benefit) << " (se "
        << human_double(result.stderr_benefit) << ")\n";
    out << "  E[R] = " << human_double(result.est_risk) << " (se "
        << human_double(result.stderr_risk) << ")\n";
    out << "  E[C] = " << human_double(result.est_net) << " (se "
        << human_double(result.stderr_net) << ")\n";
    out << "  empirical x:";
    for (double v : result.empirical_x) out << " " << human_double(v);
    out << "\n  empirical risk outcomes:";
    for (double v : result.empirical_impact) out << " " << human_double(v);
    out << "\n";
    csv.row({*inv.consumer, std::to_string(cfg.trials), std::to_string(cfg.seed),
             csv_double(result.est_benefit), csv_double(result.stderr_benefit),
             csv_double(result.est_risk), csv_double(result.stderr_risk),
             csv_double(result.est_net), csv_double(result.stderr_net)});
    return kExitOk;
}

struct ConsumerFamilies {
    ConditionalDensityFamily impact;
    ConditionalDensityFamily inference;
};

ConsumerFamilies families_for(const Scenario& s, const AgentId& consumer,
                              const CliInvocation& inv, int& grid_n) {
    const ConsumerModel* cm = s.find_consumer(consumer);
    if (!cm) throw ScenarioError("no models for consumer " + consumer);

    std::optional<FamilySpec> inference;
    std::optional<FamilySpec> impact;
    if (cm->continuous) {
        inference = cm->continuous->inference;
        impact = cm->continuous->impact;
        if (grid_n == 0) grid_n = cm->continuous->grid_n;
    }
    if (inv.inference_family) inference = parse_family_spec(*inv.inference_family);
    if (inv.impact_family) impact = parse_family_spec(*inv.impact_family);
    if (grid_n == 0) grid_n = kDefaultGridN;
    if (!inference || !impact)
        throw ScenarioError("consumer " + consumer +
                            " has no continuous densities; supply them in the scenario file or "
                            "via --inference-family/--impact-family");
    return {make_family(*impact, grid_n), make_family(*inference, grid_n)};
}

CliInvocation apply_family_args(CliInvocation inv) {
    for (const auto& arg : inv.family_args) {
        const auto eq = arg.find('=');
        const std::string key = arg.substr(0, eq);
        if (eq == std::string::npos || (key != "inference" && key != "impact"))
            throw ScenarioError("--family expects inference=<spec> or impact=<spec>, got '" +
                                arg + "'");
        if (key == "inference") inv.inference_family = arg.substr(eq + 1);
        else inv.impact_family = arg.substr(eq + 1);
    }
    return inv;
}

int cmd_continuous(const CliInvocation& raw, std::ostream& out) {
    const CliInvocation inv = apply_family_args(raw);
    const Scenario s = load_scenario(inv.scenario_path, inv.tol);
    if (!inv.consumer) throw ScenarioError("continuous needs --consumer");
    print_digest(out, inv, s);

    int grid_n = inv.grid_n;
    const ConsumerFamilies one = families_for(s, *inv.consumer, inv, grid_n);

    if (inv.match_x1) {
        if (!inv.consumer2) throw ScenarioError("--match-x1 needs --consumer2");
        int grid_n2 = grid_n;
        const ConsumerFamilies two = families_for(s, *inv.consumer2, inv, grid_n2);
        if (grid_n2 != grid_n)
            throw ScenarioError("both consumers must use the same grid_n for matching");

        out << "matching: consumer " << *inv.consumer << " at x1 = "
            << human_double(*inv.match_x1) << " against " << *inv.consumer2 << " (grid n = "
            << grid_n << ")\n";
        const auto x2 =
            solve_matching_disclosure(one.impact, one.inference, *inv.match_x1, two.impact,
                                      two.inference);
        CsvWriter csv(inv.csv_path);
        csv.row({"consumer1", "x1", "consumer2", "x2", "found"});
        if (x2) {
            const double residual = equal_impact_residual(one.impact, one.inference,
                                                          *inv.match_x1, two.impact,
                                                          two.inference, *x2);
            out << "x2 = " << human_double(*x2) << "   residual " << human_double(residual)
                << "   sup-norm density distance "
                << human_double(distribution_distance(one.impact, one.inference, *inv.match_x1,
                                                      two.impact, two.inference, *x2))
                << "\n";
            csv.row({*inv.consumer, csv_double(*inv.match_x1), *inv.consumer2, csv_double(*x2),
                     "true"});
        } else {
            out << "no matching disclosure: the mean-impact residual keeps one sign on [0,1]\n";
            csv.row({*inv.consumer, csv_double(*inv.match_x1), *inv.consumer2, "", "false"});
        }
        return kExitOk;
    }

    const RiskDensityResult result = risk_density(one.impact, one.inference, inv.x);
    const double mean = descriptor([](double w) { return w; }, result.density);
    out << "consumer: " << *inv.consumer << "   x = " << human_double(inv.x) << "   grid n = "
        << grid_n << "\n";
    out << "  mean impact = " << human_double(mean) << "   integral drift = "
        << human_double(result.integral_drift)
        << (result.renormalized ? " (renormalized)" : "") << "\n";

    CsvWriter csv(inv.csv_path);
    csv.row({"z", "f_R"});
    const int n = result.density.intervals();
    for (int i = 0; i <= n; ++i)
        csv.row({csv_double(static_cast<double>(i) / n), csv_double(result.density.values[i])});
    return kExitOk;
}

}  // namespace

int run(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    try {
        switch (inv.subcommand) {
            case Subcommand::validate: return cmd_validate(inv, out);
            case Subcommand::propagate: return cmd_propagate(inv, out);
            case Subcommand::evaluate: return cmd_evaluate(inv, out, false);
            case Subcommand::decide: return cmd_evaluate(inv, out, true);
            case Subcommand::balance: return cmd_balance(inv, out);
            case Subcommand::sweep: return cmd_sweep(inv, out);
            case Subcommand::simulate: return cmd_simulate(inv, out);
            case Subcommand::continuous: return cmd_continuous(inv, out);
        }
        err << "error: unknown subcommand\n";
        return kExitInternalError;
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
}

}  // namespace disclose::cli
