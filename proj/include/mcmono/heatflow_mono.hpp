#pragma once

#include <memory>
#include <vector>

#include "mcmono/mcf_mono.hpp"
#include "mcmono/quadrature.hpp"

namespace mcm {

// Closed-form solution of the flat-target heat equation du/dt = Laplace u
// with bounded gradient.
class HeatFlowSolution {
public:
    virtual ~HeatFlowSolution() = default;
    virtual int domainDim() const = 0;  // m
    virtual int targetDim() const = 0;  // n
    virtual std::pair<double, double> validInterval() const = 0;
    virtual RealVec value(const RealVec& x, double t) const = 0;
    virtual RealVec timeDerivative(const RealVec& x, double t) const = 0;
    // (i, alpha) entry is d u^alpha / d x^i.
    virtual SmallMat gradient(const RealVec& x, double t) const = 0;
    virtual double gradientBound() const = 0;
    // Radius beyond which |grad u|^2 is negligible; 0 means no intrinsic
    // localization (the Gaussian weight decides the box).
    virtual double supportRadius(double t) const = 0;
    // Quadratic decay structure |grad u|^2 ~ poly * exp(-coeff |x - centre|^2)
    // (coeff 0 when the gradient has no Gaussian factor). The weighted
    // integrals match their Gauss-Hermite rule to the combined quadratic.
    virtual void gaussianFactor(double t, double& coeff, RealVec& centre) const {
        (void)t;
        coeff = 0.0;
        centre = RealVec::zero(domainDim());
    }
    virtual std::string label() const = 0;
};

using HeatFlowPtr = std::shared_ptr<const HeatFlowSolution>;

HeatFlowPtr makeZeroHeatFlow(int m = 3);
HeatFlowPtr makeLinearHeatFlow(const RealVec& a);        // u = <a, x>, static
HeatFlowPtr makeHeatKernelFlow(double tShift, int m = 3);  // u = H(x, t - tShift)

struct HeatWeight {
    int m = 3;
    double t0 = 0.0;
    CentrePath centre;
};

// ∫_{R^m} |grad u|^2 (4 pi (t0-t))^(-(m-2)/2) exp(-|x-y(t)|^2/(4(t0-t))),
// by a tensor Gauss-Hermite rule centred and scaled on the combined
// quadratic form of the weight and the flow's own Gaussian factor.
double weightedEnergy(const HeatFlowSolution& flow, const HeatWeight& weight, double t,
                      const QuadratureSpec& spec, double relTol = 1e-11);

struct HeatRhs {
    double dissipation = 0.0;  // 2 ∫ |du/dt - grad u . (x-y-(t0-t)y')/(2(t0-t))|^2 Phi
    double excess = 0.0;       // (1/2) ∫ |grad u . y'|^2 Phi
};

// -dissipation + excess equals d/dt of the weighted energy.
HeatRhs heatRhs(const HeatFlowSolution& flow, const HeatWeight& weight, double t,
                const QuadratureSpec& spec);

// exp(+(1/2) ∫_t^{t0} |y'|^2) * weightedEnergy(t), nonincreasing in t. The
// positive exponent is pinned by the static linear-map oracle in the tests
// (same situation as the mean-curvature-flow correction factor).
double heatCorrectedQuantity(const HeatFlowSolution& flow, const HeatWeight& weight, double t,
                             const QuadratureSpec& spec);

struct HeatSeries {
    std::vector<double> grid;
    std::vector<double> weightedEnergy;
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

HeatSeries heatSeries(const HeatFlowSolution& flow, const HeatWeight& weight,
                      const std::vector<double>& times, const QuadratureSpec& spec,
                      double identityTol = 1e-3, double monoSlack = 1e-8);

}  // namespace mcm
