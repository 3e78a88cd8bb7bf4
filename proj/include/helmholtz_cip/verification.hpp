#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hcip {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct VerificationOptions {
    std::uint64_t seed = 20240611;
    /// Test hook: perturbs one banded-assembly entry before the oracle comparison.
    bool perturb_assembly = false;
};

/// Runs the module invariant checks and oracle comparisons.
std::vector<CheckResult> run_verification(const VerificationOptions& options);

} // namespace hcip
