#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "disclose/impact.hpp"

namespace disclose {

/// splitmix64. Chosen over the standard-library engines because the
/// distributions layered on std engines are implementation-defined; this
/// keeps simulation output bit-identical across platforms.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform double in [0, 1), 53 random bits.
    double next_uniform();
    /// Index sampled from an (approximately normalized) probability vector.
    std::size_t categorical(std::span<const double> probs);

private:
    std::uint64_t state_;
};

/// Stream-splitting rule: trial i draws from SampleRng(trial_stream(seed, i)).
/// Trials are therefore independent of execution order and thread count.
std::uint64_t trial_stream(std::uint64_t seed, std::uint64_t trial_index);

struct SimConfig {
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    AgentId consumer;
};

struct SimResult {
    double est_benefit = 0.0;
    double stderr_benefit = 0.0;
    double est_risk = 0.0;
    double stderr_risk = 0.0;
    double est_net = 0.0;
    double stderr_net = 0.0;
    std::uint64_t trials_used = 0;
    std::vector<double> empirical_x;       // received-message frequencies
    std::vector<double> empirical_impact;  // risk-outcome frequencies

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// End-to-end sampling oracle: realize edge forwarding by coin flips,
/// degrade along delivered paths with the serial fold, fuse arrivals with
/// the parallel operator, then sample inference and impact outcomes from
/// the model columns. Identical (scenario, config) gives identical output.
SimResult simulate(const Scenario& s, const SimConfig& cfg, const Operators& ops);
SimResult simulate(const Scenario& s, const SimConfig& cfg);

struct OracleComparison {
    DecisionReport analytic;
    SimResult sim;
    double z_benefit = 0.0;
    double z_risk = 0.0;
    double z_net = 0.0;
    bool pass = false;
};

/// Passes iff every analytic expectation lies within 3 standard errors of
/// its simulated estimate (exact agreement required where stderr is 0).
OracleComparison oracle_compare(const Scenario& s, const AgentId& consumer,
                                const SimConfig& cfg, const Operators& ops);
OracleComparison oracle_compare(const Scenario& s, const AgentId& consumer,
                                const SimConfig& cfg);

}  // namespace disclose
