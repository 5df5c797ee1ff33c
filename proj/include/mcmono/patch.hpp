#pragma once

#include <functional>
#include <memory>
#include <string>

#include "mcmono/errors.hpp"
#include "mcmono/realvec.hpp"

namespace mcm {

// Axis-aligned box in parameter space.
struct Box {
    RealVec lo;
    RealVec hi;
    int dim() const { return lo.dim(); }
    double width(int axis) const { return hi[axis] - lo[axis]; }
    bool contains(const RealVec& u, double pad = 0.0) const {
        for (int i = 0; i < dim(); ++i)
            if (u[i] < lo[i] - pad || u[i] > hi[i] + pad) return false;
        return true;
    }
    RealVec center() const { return 0.5 * (lo + hi); }
};

// Analytic immersion of a k-dimensional parameter box into R^n. Exact first
// derivatives; mean curvature vector when the catalog provides it.
class ParametricPatch {
public:
    virtual ~ParametricPatch() = default;

    virtual int paramDim() const = 0;    // k
    virtual int ambientDim() const = 0;  // n
    virtual Box domain() const = 0;
    virtual RealVec embed(const RealVec& u) const = 0;
    // Rows are the partial derivatives of embed (k x n).
    virtual SmallMat jacobian(const RealVec& u) const = 0;
    virtual bool hasMeanCurvature() const { return false; }
    virtual RealVec meanCurvature(const RealVec&) const {
        throw Error("patch '" + label() + "' has no mean curvature evaluator");
    }
    virtual std::string label() const = 0;
};

using PatchPtr = std::shared_ptr<const ParametricPatch>;

// Gram determinant below this is treated as a singular chart (binary64
// noise floor).
inline constexpr double kGramDetFloor = 1e-14;

// A point on a patch with the Jacobian already evaluated; this is what
// quadrature hands to integrands.
struct PatchPoint {
    const ParametricPatch* patch = nullptr;
    RealVec u;
    RealVec x;
    SmallMat jac;
};

// sqrt(det J J^T); throws SingularChartError at or below the floor.
double areaElement(const SmallMat& jac);

// Orthogonal projection of v onto the row space of jac.
RealVec tangentialPart(const SmallMat& jac, const RealVec& v);
inline RealVec normalPart(const SmallMat& jac, const RealVec& v) {
    return v - tangentialPart(jac, v);
}

RealVec tangentialPart(const ParametricPatch& patch, const RealVec& u, const RealVec& v);
RealVec normalPart(const ParametricPatch& patch, const RealVec& u, const RealVec& v);

// Surface divergence of an ambient vector field along the patch,
// sum_ij G^ij <d_i W(embed(u)), d_j embed>, with the field derivatives
// taken by Richardson-extrapolated central differences in parameter space.
double surfaceDivergenceFD(const ParametricPatch& patch, const RealVec& u,
                           const std::function<RealVec(const RealVec&)>& field);

}  // namespace mcm
