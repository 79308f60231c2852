#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
    using disclose::cli::CliInvocation;
    using disclose::cli::Subcommand;

    CLI::App app{
        "disclose - expected benefit/risk analysis for information sharing over a "
        "communication graph"};
    app.require_subcommand(1);

    CliInvocation inv;

    const auto add_scenario = [&](CLI::App* sub) {
        sub->add_option("scenario", inv.scenario_path, "scenario JSON file")
            ->required()
            ->type_name("FILE");
        sub->add_option("--tol", inv.tol, "column-stochasticity tolerance (default 1e-9)");
    };
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--csv", inv.csv_path, "write machine-readable CSV to this path");
        sub->add_option("--serial", inv.serial_op, "serial operator (default: product)");
        sub->add_option("--parallel", inv.parallel_op, "parallel operator (default: min)");
    };
    const auto add_consumer = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--consumer", inv.consumer, "consumer agent id");
        if (required) opt->required();
    };

    auto* validate = app.add_subcommand("validate", "check scenario well-formedness");
    add_scenario(validate);

    auto* propagate =
        app.add_subcommand("propagate", "effective disclosure and received-message distribution");
    add_scenario(propagate);
    add_common(propagate);
    add_consumer(propagate, false);

    auto* evaluate = app.add_subcommand("evaluate", "expected benefit, risk and net benefit");
    add_scenario(evaluate);
    add_common(evaluate);
    add_consumer(evaluate, false);

    auto* decide = app.add_subcommand("decide", "share/withhold decision for one consumer");
    add_scenario(decide);
    add_common(decide);
    add_consumer(decide, true);

    auto* balance =
        app.add_subcommand("balance", "inference probability equalizing two expected impacts");
    balance->add_option("--q1", inv.q1, "consumer 1 inference probability")->required();
    balance->add_option("--w1", inv.w1, "consumer 1 pair w(0),w(1)")
        ->required()
        ->delimiter(',')
        ->expected(2);
    balance->add_option("--w2", inv.w2, "consumer 2 pair w(0),w(1)")
        ->required()
        ->delimiter(',')
        ->expected(2);
    balance->add_option("--csv", inv.csv_path, "write machine-readable CSV to this path");

    auto* sweep = app.add_subcommand("sweep", "what-if table over disclosure degrees");
    add_scenario(sweep);
    add_common(sweep);
    add_consumer(sweep, true);
    sweep->add_option("--grid", inv.grid, "explicit degrees, e.g. --grid 0,0.5,1")
        ->delimiter(',');
    sweep->add_option("--grid-points", inv.grid_points,
                      "uniform grid size over [0,1] (default 11)");

    auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo estimate");
    add_scenario(simulate);
    add_common(simulate);
    add_consumer(simulate, true);
    simulate->add_option("--trials", inv.trials, "number of trials (default 100000)");
    simulate->add_option("--seed", inv.seed, "RNG seed (default 1)");
    simulate->add_flag("--compare", inv.compare,
                       "compare against the analytic pipeline (3 standard errors)");

    auto* continuous = app.add_subcommand("continuous", "continuous-density risk analysis");
    add_scenario(continuous);
    add_consumer(continuous, true);
    continuous->add_option("--csv", inv.csv_path, "write density table CSV to this path");
    continuous->add_option("--x", inv.x, "disclosure degree (default 1)");
    continuous->add_option("--grid-n", inv.grid_n, "quadrature intervals (default 256)");
    continuous->add_option("--match-x1", inv.match_x1,
                           "solve for consumer2's degree matching this consumer at x1");
    continuous->add_option("--consumer2", inv.consumer2, "matching partner agent id");
    continuous->add_option("--family", inv.family_args,
                           "density family override, inference=<spec> or impact=<spec>, e.g. "
                           "--family inference=triangular:center0=0.2,center1=0.5,width=0.3");
    continuous->add_option("--inference-family", inv.inference_family,
                           "shorthand for --family inference=<spec>");
    continuous->add_option("--impact-family", inv.impact_family,
                           "shorthand for --family impact=<spec>");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) inv.subcommand = Subcommand::validate;
    else if (propagate->parsed()) inv.subcommand = Subcommand::propagate;
    else if (evaluate->parsed()) inv.subcommand = Subcommand::evaluate;
    else if (decide->parsed()) inv.subcommand = Subcommand::decide;
    else if (balance->parsed()) inv.subcommand = Subcommand::balance;
    else if (sweep->parsed()) inv.subcommand = Subcommand::sweep;
    else if (simulate->parsed()) inv.subcommand = Subcommand::simulate;
    else if (continuous->parsed()) inv.subcommand = Subcommand::continuous;

    return disclose::cli::run(inv, std::cout, std::cerr);
}
