#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcm {

struct CheckResult {
    std::string name;
    bool pass = false;
    double worstResidual = 0.0;
    double tolerance = 0.0;
    int samples = 0;
};

// Seeded randomized invariant sweeps over the ball families and the
// geometry kernel: nesting, level/ball consistency, defining-identity
// residuals, the q = 1 rigid-motion relation, branch continuity of the
// q-family level function, projection idempotence, and coarea consistency
// on the catalog patches.
std::vector<CheckResult> runIdentitySuite(std::uint64_t seed);

}  // namespace mcm
