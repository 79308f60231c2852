#pragma once

#include <stdexcept>

namespace disclose {

/// Input-class failure: malformed scenario files, model dimension
/// mismatches, unreachable consumers, degenerate parameter sets.
/// The CLI maps these to exit code 2; anything else is exit code 1.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace disclose
