#pragma once

#include <vector>

#include "mcmono/ball_family.hpp"
#include "mcmono/catalog.hpp"
#include "mcmono/quadrature.hpp"

namespace mcm {

// Geometric grid lo * (hi/lo)^(i/(count-1)), endpoints exact.
std::vector<double> geometricGrid(double lo, double hi, int count);

double unitBallVolume(int k);

// s^(-k/2) |Sigma ∩ E_s|. Monotonicity semantics assume the catalog declares
// the surface minimal (or supplies a mean curvature bound for the corrected
// variant below).
double areaRatio(const Surface& surface, const MinimalBallFamily& family, double s,
                 const QuadratureSpec& spec);

// Boundary integral equal to d/ds of the area ratio on minimal surfaces:
//   (s^(-(k+2)/2) / 2) ∮_{Sigma ∩ {f=s}} (|(x-y)^perp|^2 + s^2 |y^T|^2)
//                                          / |(x-y+sy)^T|.
// Two-dimensional charts only.
double boundaryFlux(const Surface& surface, const MinimalBallFamily& family, double s,
                    const QuadratureSpec& spec);

// Bulk integral over {s < f < t} of f^(-k/2)(|(x-y)^perp|^2 + f^2|y^T|^2)/|x-y|^2,
// equal to areaRatio(t) - areaRatio(s) on minimal surfaces. Requires s >= 1e-3
// (the f^(-k/2) weight is too singular below that for fixed-order rules).
double bulkIncrement(const Surface& surface, const MinimalBallFamily& family, double s,
                     double t, const QuadratureSpec& spec);

// Integrating factor exp(k C_H mu(s)), mu = (3/2) s |y| + sqrt(s (1-|y|^2)),
// that restores monotonicity of the area ratio when |H| <= C_H.
double almostMonoFactor(const MinimalBallFamily& family, int k, double cH, double s);

struct DensityEstimate {
    double density = 0.0;
    std::vector<double> raw;  // normalized ratios at the sampled scales
};

// Richardson-extrapolated (in sqrt s) limit of
//   (1-|y|^2)^(-k/2) s^(-k/2) |Sigma ∩ E_s| / |B_1^k|  as s -> 0.
// Scales sampled are sMin * 4^i, i = 0..samples-1.
DensityEstimate densityLimit(const Surface& surface, const MinimalBallFamily& family,
                             double sMin, int samples, const QuadratureSpec& spec);

// Divergence identity for the comparison field
//   W = -(1/k)(f^(-k/2) - 1)(x - y) + F(f) y,
//   F(t) = (t^((2-k)/2) - 1)/(k-2) for k > 2,  -(1/2) log t for k = 2,
// with W0 = (1/k)(x-y) - W: the surface divergence of W0 equals
//   (f^(-k/2) |(x-y)^perp|^2 + f^((4-k)/2) |y^T|^2) / |x-y|^2.
struct BHFieldSample {
    RealVec x;
    RealVec w;
    RealVec w0;
    double divNumeric = 0.0;     // 1 - div_Sigma W by parameter-space differences
    double divClosedForm = 0.0;  // the closed-form right-hand side
};

BHFieldSample bhFieldIdentity(const ParametricPatch& patch, const MinimalBallFamily& family,
                              const RealVec& u);

struct BrendleHungReport {
    std::vector<double> grid;
    std::vector<double> ratio;
    double density = 0.0;
    double bound = 0.0;   // |B_1^k| (1-|y|^2)^(k/2) * density
    double margin = 0.0;  // ratio at the top scale minus the bound
    bool monotone = false;
    bool pass = false;
};

// Checks the sharp area bound: the ratio is nondecreasing and its value at
// the top of the grid dominates the density-weighted flat bound.
BrendleHungReport brendleHungCheck(const Surface& surface, const MinimalBallFamily& family,
                                   const std::vector<double>& sGrid,
                                   const QuadratureSpec& spec);

struct MonoTolerances {
    double diffRel = 1e-3;
    double intRel = 1e-4;
    double monoSlack = 1e-8;
};

struct MinimalMonoReport {
    std::vector<double> grid;
    std::vector<double> ratio;
    std::vector<double> corrected;      // almost-mono factored ratio (cH > 0)
    std::vector<double> boundaryFlux;   // k = 2 and minimal only
    std::vector<double> fdDerivative;
    std::vector<double> bulkIncrement;  // over (grid[i-1], grid[i]); first entry 0
    std::vector<double> residualDiff;
    std::vector<double> residualInt;
    bool monotone = false;
    bool identityDiff = false;
    bool identityInt = false;
    bool verdict = false;
    double worstResidual = 0.0;
    double quadBound = 0.0;
};

// Full grid sweep. When cH > 0 the surface is only assumed to satisfy
// |H| <= cH; monotonicity is then checked on the factored ratio and the
// minimal-surface identities are skipped.
MinimalMonoReport minimalMonoReport(const Surface& surface, const MinimalBallFamily& family,
                                    const std::vector<double>& grid,
                                    const QuadratureSpec& spec,
                                    const MonoTolerances& tol = {}, double cH = 0.0,
                                    bool negateFluxFault = false);

}  // namespace mcm
