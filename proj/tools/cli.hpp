#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "disclose/continuous.hpp"

namespace disclose::cli {

enum class Subcommand {
    validate,
    propagate,
    evaluate,
    decide,
    balance,
    sweep,
    simulate,
    continuous,
};

struct CliInvocation {
    Subcommand subcommand = Subcommand::validate;
    std::string scenario_path;  // required for everything except balance

    std::optional<std::string> consumer;
    std::optional<std::string> consumer2;  // continuous matching partner
    std::string csv_path;                  // empty = no CSV output
    double tol = 1e-9;
    std::optional<std::string> serial_op;
    std::optional<std::string> parallel_op;

    // simulate
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    bool compare = false;

    // sweep
    std::vector<double> grid;
    int grid_points = 0;  // uniform grid size when no explicit grid given

    // balance
    double q1 = 0.0;
    std::vector<double> w1;  // two entries
    std::vector<double> w2;  // two entries

    // continuous
    double x = 1.0;
    int grid_n = 0;  // 0 = scenario file value or default
    std::optional<double> match_x1;
    std::optional<std::string> inference_family;  // compact spec overrides
    std::optional<std::string> impact_family;
    // Repeatable --family inference=<spec> / impact=<spec> form; applied
    // onto the two fields above before dispatch.
    std::vector<std::string> family_args;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternalError = 1;
inline constexpr int kExitInputError = 2;

/// Dispatches one parsed invocation. Human-readable report goes to out,
/// diagnostics to err, machine output to the --csv path when given.
/// Exit code 0 covers withhold verdicts and infeasible balance results;
/// those are answers. 2 flags bad input, 1 internal failures.
int run(const CliInvocation& inv, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal rendering used for all CSV output.
std::string csv_double(double v);

/// Human rendering: up to 6 significant digits.
std::string human_double(double v);

/// Parses "uniform", "triangular:center0=..,center1=..,width=..",
/// "beta:a0=..,a1=..,b0=..,b1=..". Throws ScenarioError on bad specs.
FamilySpec parse_family_spec(const std::string& spec);

}  // namespace disclose::cli
