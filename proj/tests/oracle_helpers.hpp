#pragma once

// Test-only oracles, kept independent of the library quadrature paths:
// stratified Monte Carlo, finite-difference geometry checks, and dense-grid
// reference integrals.

#include <cmath>
#include <cstdint>

#include "mcmono/patch.hpp"

namespace oracle {

// Deterministic stratified-jittered Monte Carlo estimate of
// ∫ over {g(embed(u)) < c} of the area element, with G^2 strata.
inline double monteCarloSublevelArea(const mcm::ParametricPatch& patch,
                                     const std::function<double(const mcm::RealVec&)>& g,
                                     double c, int grid, std::uint64_t seed) {
    const mcm::Box box = patch.domain();
    std::uint64_t state = seed;
    auto uni = [&]() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
    };
    long double sum = 0.0L;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            mcm::RealVec u{box.lo[0] + box.width(0) * (i + uni()) / grid,
                           box.lo[1] + box.width(1) * (j + uni()) / grid};
            const mcm::RealVec x = patch.embed(u);
            if (g(x) < c) sum += mcm::areaElement(patch.jacobian(u));
        }
    }
    return static_cast<double>(sum) * box.width(0) * box.width(1) /
           (static_cast<double>(grid) * grid);
}

// Central-difference Jacobian of the embedding.
inline mcm::SmallMat fdJacobian(const mcm::ParametricPatch& patch, const mcm::RealVec& u,
                                double h = 1e-6) {
    mcm::SmallMat j(patch.paramDim(), patch.ambientDim());
    for (int a = 0; a < patch.paramDim(); ++a) {
        mcm::RealVec up = u, um = u;
        up[a] += h;
        um[a] -= h;
        j.setRow(a, (1.0 / (2.0 * h)) * (patch.embed(up) - patch.embed(um)));
    }
    return j;
}

// Mean curvature vector by finite differences: normal projection of the
// second-derivative contraction against the inverse Gram matrix.
inline mcm::RealVec fdMeanCurvature(const mcm::ParametricPatch& patch, const mcm::RealVec& u,
                                    double h = 1e-4) {
    const int k = patch.paramDim();
    const int n = patch.ambientDim();
    const mcm::SmallMat jac = patch.jacobian(u);
    const mcm::SmallMat gram = mcm::gramMatrix(jac);
    const mcm::RealVec x0 = patch.embed(u);

    mcm::RealVec trace(n);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            // inverse Gram entry
            mcm::RealVec ginvRow;
            mcm::solveSymmetric(gram, mcm::RealVec::unit(k, a), ginvRow, 1e-300);
            // second derivative d_a d_b embed
            mcm::RealVec upp = u, upm = u, ump = u, umm = u;
            upp[a] += h; upp[b] += h;
            upm[a] += h; upm[b] -= h;
            ump[a] -= h; ump[b] += h;
            umm[a] -= h; umm[b] -= h;
            const mcm::RealVec second =
                (1.0 / (4.0 * h * h)) *
                (patch.embed(upp) - patch.embed(upm) - patch.embed(ump) + patch.embed(umm));
            trace += ginvRow[b] * second;
        }
    }
    (void)x0;
    return mcm::normalPart(jac, trace);
}

}  // namespace oracle
