#include <benchmark/benchmark.h>

#include "disclose/continuous.hpp"
#include "disclose/impact.hpp"
#include "disclose/montecarlo.hpp"
#include "disclose/scenario_io.hpp"

#ifndef DISCLOSE_SCENARIO_DIR
#define DISCLOSE_SCENARIO_DIR "scenarios"
#endif

namespace {

disclose::Scenario load_worked_scenario() {
    return disclose::load_scenario(std::string(DISCLOSE_SCENARIO_DIR) + "/james_alec.json");
}

void BM_Evaluate(benchmark::State& state) {
    const disclose::Scenario s = load_worked_scenario();
    for (auto _ : state) {
        auto report = disclose::evaluate(s, "Alec");
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_Evaluate);

void BM_EffectiveDisclosureDiamond(benchmark::State& state) {
    const disclose::Scenario s =
        disclose::load_scenario(std::string(DISCLOSE_SCENARIO_DIR) + "/diamond.json");
    for (auto _ : state) {
        double d = disclose::effective_disclosure(s, "a4");
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_EffectiveDisclosureDiamond);

void BM_Simulate(benchmark::State& state) {
    const disclose::Scenario s = load_worked_scenario();
    const disclose::SimConfig cfg{static_cast<std::uint64_t>(state.range(0)), 42, "Alec"};
    for (auto _ : state) {
        auto result = disclose::simulate(s, cfg);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(100000);

void BM_RiskDensity(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    disclose::FamilySpec spec;
    spec.kind = disclose::FamilySpec::Kind::triangular;
    spec.center0 = 0.2;
    spec.center1 = 0.6;
    spec.width = 0.3;
    const disclose::ConditionalDensityFamily impact = disclose::make_family(spec, n);
    const disclose::ConditionalDensityFamily inference = disclose::make_family(spec, n);
    for (auto _ : state) {
        auto r = disclose::risk_density(impact, inference, 0.7);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_RiskDensity)->Arg(64)->Arg(256);

void BM_LoadScenario(benchmark::State& state) {
    for (auto _ : state) {
        auto s = load_worked_scenario();
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_LoadScenario);

}  // namespace

BENCHMARK_MAIN();
