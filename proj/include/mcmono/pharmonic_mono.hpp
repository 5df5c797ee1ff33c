#pragma once

#include <memory>
#include <vector>

#include "mcmono/ball_family.hpp"
#include "mcmono/quadrature.hpp"
#include "mcmono/rng.hpp"

namespace mcm {

// Closed-form map with exact gradient; the catalog entries are stationary
// critical points of the p-energy (verified numerically, not assumed).
class MapSolution {
public:
    virtual ~MapSolution() = default;
    virtual int domainDim() const = 0;  // m
    virtual int targetDim() const = 0;  // n
    virtual double p() const = 0;
    virtual RealVec value(const RealVec& x) const = 0;
    // (i, alpha) entry is d u^alpha / d x^i (m rows, n columns).
    virtual SmallMat gradient(const RealVec& x) const = 0;
    virtual std::vector<RealVec> singularPoints() const { return {}; }
    virtual std::string label() const = 0;
};

using MapPtr = std::shared_ptr<const MapSolution>;

MapPtr makeConstantMap(int m, const RealVec& value, double p = 2.0);
MapPtr makeLinearMap(const SmallMat& matrix, double p = 2.0);  // u = A x into flat R^n
MapPtr makeRadialMap(int m = 3, double p = 2.0);               // x / |x| into the sphere

// |grad u|^(p-2) with the critical-set convention: zero whenever the
// gradient vanishes (covers the singular exponent range p < 2).
double gradientWeight(double gradNormSq, double p);

// s^((p-m)/2) ∫_{E_s^(q)} |grad u|^p. Production route: exact ball-aligned
// polar quadrature (E_s is a round ball) with singular points carved into
// radial sub-integrals.
double energyRatio(const MapSolution& map, const QBallFamily& family, double s,
                   const QuadratureSpec& spec);

// Same quantity through the generic sub-level engine over a bounding box;
// kept as the independent cross-check of the ball-aligned route.
double energyRatioViaSublevel(const MapSolution& map, const QBallFamily& family, double s,
                              const QuadratureSpec& spec);

struct PharmBoundary {
    double a = 0.0;  // nonnegative q-term (Cauchy-Schwarz)
    double b = 0.0;  // p-term
    double aIntegrandMin = 0.0;
};

// Sphere-boundary terms whose sum equals d/ds of the energy ratio:
//   A = q s^((p-m+2)/2) / (2 R) ∮ |grad u|^(p-2) (|y|^2 |grad u|^2 - |y.grad u|^2)
//   B = s^((p-m-2)/2) / (2 R) ∮ |grad u|^(p-2) (p |x.grad u|^2 - (p-q) s^2 |y.grad u|^2)
PharmBoundary pharmBoundaryTerms(const MapSolution& map, const QBallFamily& family, double s,
                                 const QuadratureSpec& spec);

// Bulk form over {s < f < t}; equals energyRatio(t) - energyRatio(s).
double pharmBulkIncrement(const MapSolution& map, const QBallFamily& family, double s,
                          double t, const QuadratureSpec& spec);

// Integral of F over the sphere |x - centre| = radius in R^3 using two
// partition-of-unity polar charts (poles never carry weight).
double sphereIntegral(const RealVec& centre, double radius,
                      const std::function<double(const RealVec&)>& fn,
                      const QuadratureSpec& spec, double relTol = 1e-9);

struct CorollarySeries {
    std::vector<double> grid;
    std::vector<double> interpolated;  // s^(((q-1)/(p-1))(p-m)/2) * energy
    std::vector<double> sharp;         // s^((p-m)/2) * energy
    bool interpolatedMonotone = false;
    bool sharpMonotone = false;
    double sharpRange = 0.0;
};

CorollarySeries corollaryQuantities(const MapSolution& map, const QBallFamily& family,
                                    const std::vector<double>& sGrid,
                                    const QuadratureSpec& spec);

// Polynomial vector field on R^m with analytic Jacobian.
class PolyVectorField {
public:
    static PolyVectorField identity(int m);
    static PolyVectorField random(int m, int degree, Rng& rng);

    RealVec eval(const RealVec& x) const;
    SmallMat jacobian(const RealVec& x) const;  // (i, j) = dX_i/dx_j
    int dim() const { return m_; }

private:
    int m_ = 0;
    std::vector<std::array<int, 3>> expos_;
    std::vector<std::vector<double>> coef_;  // per component
};

// Inner-variation identity residual |bulk - boundary| / (1 + |bulk|):
//   bulk     = ∫_box |grad u|^(p-2)(|grad u|^2 div X - p <grad X, grad u ⊗ grad u>)
//   boundary = ∮_faces |grad u|^(p-2)(|grad u|^2 X.nu - p <X.grad u, nu.grad u>).
double stationarityCheck(const MapSolution& map, const Box& box, const PolyVectorField& field,
                         const QuadratureSpec& spec);

struct PharmTolerances {
    double diffRel = 1e-3;
    double intRel = 1e-4;
    double monoSlack = 1e-8;
};

struct PharmReport {
    std::vector<double> grid;
    std::vector<double> ratio;
    std::vector<double> boundaryA;
    std::vector<double> boundaryB;
    std::vector<double> fdDerivative;
    std::vector<double> bulkIncrement;  // over (grid[i-1], grid[i]); first entry 0
    std::vector<double> residualDiff;
    std::vector<double> residualInt;
    std::vector<double> interpolated;
    bool identityDiff = false;
    bool identityInt = false;
    bool interpolatedMonotone = false;
    bool rigidityConsistent = false;  // constancy only for the constant map (y != 0, q = p)
    bool verdict = false;
    double worstResidual = 0.0;
};

PharmReport pharmReport(const MapSolution& map, const QBallFamily& family,
                        const std::vector<double>& grid, const QuadratureSpec& spec,
                        const PharmTolerances& tol = {});

}  // namespace mcm
