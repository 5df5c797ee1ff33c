#pragma once

#include <functional>
#include <vector>

#include "mcmono/patch.hpp"

namespace mcm {

// Scalar field on ambient space; analytic gradient optional (finite
// differences in parameter space are used when absent).
struct ScalarField {
    std::function<double(const RealVec&)> value;
    std::function<RealVec(const RealVec&)> gradient;  // may be empty
};

using PatchIntegrand = std::function<double(const PatchPoint&)>;

struct QuadratureSpec {
    int cellsPerAxis = 8;
    int order = 7;            // Gauss nodes per axis, 2..10
    int refinementDepth = 6;  // dyadic depth for boundary-crossing cells, <= 12

    // Parameter-space points near which cells are refined regardless of the
    // indicator (integrable singularities of the integrand).
    std::vector<RealVec> gradeCenters;
    int gradeDepth = 12;

    // When positive, sublevel/patch integration throws ToleranceNotMetError
    // if the achieved bound exceeds targetTol * (1 + |value|).
    double targetTol = 0.0;

    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double errorBound = 0.0;
};

// Integral of `integrand` (against the induced area element) over the part
// of the patch where g < level. Cells crossing {g = level} are refined
// dyadically; at the finest level the cut is resolved by 1-D root finding
// along the dominant gradient axis, so the indicator is never smoothed.
IntegralResult integrateSublevel(const ParametricPatch& patch, const ScalarField& g,
                                 double level, const PatchIntegrand& integrand,
                                 const QuadratureSpec& spec);

// Integral over the parameter box (or an explicit sub-box `window`),
// h-adaptive on embedded-rule error estimates down to relative tolerance
// `relTol`.
IntegralResult integratePatch(const ParametricPatch& patch, const PatchIntegrand& integrand,
                              const QuadratureSpec& spec, double relTol = 1e-9,
                              const Box* window = nullptr);

// Polyline approximation of {g(embed(u)) = level} in parameter space
// (k = 2 only). Segment endpoints are Newton-projected onto the level set;
// segments need not be stitched.
struct LevelPolyline {
    struct Segment {
        RealVec uStart;
        RealVec uEnd;
    };
    std::vector<Segment> segments;
};

LevelPolyline extractLevelCurve(const ParametricPatch& patch, const ScalarField& g,
                                double level, const QuadratureSpec& spec);

// Line integral of `integrand` over {g = level} on a 2-dimensional patch,
// with respect to the arclength induced by the immersion. Throws
// RegularValueError when the restricted gradient degenerates on the level
// set.
double integrateLevelCurve(const ParametricPatch& patch, const ScalarField& g, double level,
                           const PatchIntegrand& integrand, const QuadratureSpec& spec);

}  // namespace mcm
