#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mcmono/catalog.hpp"
#include "mcmono/quadrature.hpp"

namespace mcm {

// Time-indexed exact mean curvature flow: each slice is an analytic patch
// whose normal velocity equals the mean curvature vector.
class FlowSolution {
public:
    virtual ~FlowSolution() = default;
    virtual int submanifoldDim() const = 0;  // k
    virtual int ambientDim() const = 0;
    virtual std::pair<double, double> validInterval() const = 0;  // open
    virtual PatchPtr patchAt(double t) const = 0;
    virtual RealVec velocityAt(double t, const RealVec& u) const = 0;
    // Parameter sub-box covering {u : |embed(u) - centre| <= radius};
    // defaults to the full domain.
    virtual Box paramWindow(double t, const RealVec& centre, double radius) const;
    virtual std::string label() const = 0;
};

using FlowPtr = std::shared_ptr<const FlowSolution>;

FlowPtr makeStaticPlaneFlow(const RealVec& point, const RealVec& normal, double halfExtent);
FlowPtr makeShrinkingSphereFlow();    // S^2(sqrt(-4t)) in R^3, t < 0
FlowPtr makeShrinkingCircleFlow();    // S^1(sqrt(-2t)) in R^2, t < 0
FlowPtr makeShrinkingCylinderFlow(double zHalf = 40.0);  // S^1(sqrt(-2t)) x R in R^3

// Smooth centre curve with analytic derivative; the squared-speed integral
// is analytic for the constant/linear/approach paths and 32-node Gauss
// otherwise.
struct CentrePath {
    std::function<RealVec(double)> y;
    std::function<RealVec(double)> yPrime;
    std::function<double(double, double)> speedSqIntegral;  // may be empty
    std::string label;
};

CentrePath constantPath(const RealVec& c);
CentrePath linearPath(const RealVec& base, const RealVec& velocity);  // base + t v
// y(t) = x0 + (t0 - t) y0: reaches x0 exactly at the singular time.
CentrePath approachPath(const RealVec& x0, const RealVec& y0, double t0);
CentrePath circularPath(double eps, int dim);   // eps (cos t, sin t, 0, ...)
CentrePath parabolicPath(double eps, int dim);  // eps (t, t^2, 0, ...)

double pathSpeedSqIntegral(const CentrePath& path, double t, double t0);

struct GaussianWeight {
    int k = 2;
    double t0 = 0.0;
    CentrePath centre;
};

// Gaussian density (4 pi t0scale)^(-k/2) ∫ exp(-|x-x0|^2 / (4 t0scale)).
// `window` restricts integration; `checkTail` adds a truncation estimate on
// window faces that lie strictly inside the chart domain.
IntegralResult gaussianDensity(const ParametricPatch& patch, const RealVec& x0,
                               double t0scale, const QuadratureSpec& spec,
                               double relTol = 1e-9, const Box* window = nullptr,
                               bool checkTail = true);

double movingDensity(const FlowSolution& flow, const GaussianWeight& weight, double t,
                     const QuadratureSpec& spec);

struct McfRhs {
    double dissipation = 0.0;  // ∫ |H + (x - y - (t0-t) y')^perp / (2(t0-t))|^2 Phi
    double excess = 0.0;       // (1/4) ∫ |(y')^perp|^2 Phi
};

// -dissipation + excess equals d/dt of the moving density.
McfRhs mcfRhs(const FlowSolution& flow, const GaussianWeight& weight, double t,
              const QuadratureSpec& spec);

// exp(+(1/4) ∫_t^{t0} |y'|^2) * movingDensity(t), nonincreasing in t.
// Note: the correction factor carries a positive exponent; the static-plane
// equality case (identically 1) pins this sign, and the regression suite
// enforces it.
double correctedQuantity(const FlowSolution& flow, const GaussianWeight& weight, double t,
                         const QuadratureSpec& spec);

// Self-shrinker catalog (H = -x^perp / 2) for the entropy scan.
PatchPtr makeShrinkerPlane(double halfExtent = 26.0);    // plane through 0 in R^3
PatchPtr makeShrinkerCircle();                           // S^1(sqrt 2) in R^2
PatchPtr makeShrinkerSphere();                           // S^2(2) in R^3
PatchPtr makeShrinkerCylinder(double zHalf = 26.0);      // S^1(sqrt 2) x R in R^3

// Largest |H + x^perp/2| over a deterministic parameter sample.
double shrinkerResidual(const ParametricPatch& patch);

struct EntropyScan {
    std::vector<double> grid;       // s >= 0
    std::vector<double> gaussianArea;
    std::vector<double> rhsClosedForm;
    std::vector<double> fdDerivative;  // NaN at the endpoints
    std::vector<double> residual;
    bool nonincreasing = false;
    bool maxAtZero = false;
    bool identity = false;
    bool verdict = false;
};

// Scan of F(s) = gaussian area with centre s*y and scale 1 + a s^2 along a
// self-shrinker, against the closed-form derivative
//   -s / (2 (1+a s^2)^2) ∫ |(a s x + y)^perp|^2 rho.
EntropyScan entropyScan(const ParametricPatch& shrinker, const RealVec& y, double a,
                        const std::vector<double>& sGrid, const QuadratureSpec& spec,
                        double identityTol = 1e-3);

struct McfSeries {
    std::vector<double> grid;  // times
    std::vector<double> movingDensity;
    std::vector<double> dissipation;
    std::vector<double> excess;
    std::vector<double> fdDerivative;
    std::vector<double> correctedQuantity;
    std::vector<double> residual;
    bool identity = false;
    bool correctedMonotone = false;
    bool verdict = false;
    double worstResidual = 0.0;
};

McfSeries mcfSeries(const FlowSolution& flow, const GaussianWeight& weight,
                    const std::vector<double>& times, const QuadratureSpec& spec,
                    double identityTol = 1e-3, double monoSlack = 1e-8);

}  // namespace mcm
