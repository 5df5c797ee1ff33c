#include "mcmono/mcf_mono.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcmono/gauss.hpp"

namespace mcm {

namespace {

double gaussianWeightValue(int k, double scale, double dist2) {
    return std::pow(4.0 * M_PI * scale, -0.5 * k) * std::exp(-dist2 / (4.0 * scale));
}

double truncationRadius(double scale) { return 14.2 * std::sqrt(scale); }

Box clampWindow(const Box& window, const Box& domain) {
    Box out = window;
    for (int a = 0; a < domain.dim(); ++a) {
        out.lo[a] = std::max(out.lo[a], domain.lo[a]);
        out.hi[a] = std::min(out.hi[a], domain.hi[a]);
        if (!(out.lo[a] < out.hi[a])) {
            out.lo[a] = domain.lo[a];
            out.hi[a] = domain.hi[a];
        }
    }
    return out;
}

class StaticPlaneFlow final : public FlowSolution {
public:
    StaticPlaneFlow(RealVec point, RealVec normal, double halfExtent)
        : point_(std::move(point)) {
        patch_ = makePlanePatch(point_, normal, halfExtent, "plane");
    }
    int submanifoldDim() const override { return 2; }
    int ambientDim() const override { return 3; }
    std::pair<double, double> validInterval() const override { return {-1e30, 1e30}; }
    PatchPtr patchAt(double) const override { return patch_; }
    RealVec velocityAt(double, const RealVec&) const override { return RealVec::zero(3); }
    Box paramWindow(double t, const RealVec& centre, double radius) const override {
        // Project the centre into the tangent coordinates of the chart.
        const SmallMat jac = patch_->jacobian(RealVec{0.0, 0.0});
        const RealVec d = centre - patch_->embed(RealVec{0.0, 0.0});
        RealVec u0 = jac.apply(d);
        (void)t;
        Box w{RealVec{u0[0] - radius, u0[1] - radius}, RealVec{u0[0] + radius, u0[1] + radius}};
        return clampWindow(w, patch_->domain());
    }
    std::string label() const override { return "plane"; }

private:
    RealVec point_;
    PatchPtr patch_;
};

class ShrinkingSphereFlow final : public FlowSolution {
public:
    int submanifoldDim() const override { return 2; }
    int ambientDim() const override { return 3; }
    std::pair<double, double> validInterval() const override { return {-1e30, 0.0}; }
    PatchPtr patchAt(double t) const override {
        return makeSpherePolarPatch(RealVec::zero(3), radius(t));
    }
    RealVec velocityAt(double t, const RealVec& u) const override {
        // R'(t) omega = -(2/R) omega, the mean curvature vector.
        const RealVec x = patchAt(t)->embed(u);
        const double r = radius(t);
        return (-2.0 / (r * r)) * x;
    }
    std::string label() const override { return "sphere"; }

private:
    static double radius(double t) {
        if (t >= 0.0) throw DomainError("shrinking sphere exists for t < 0");
        return std::sqrt(-4.0 * t);
    }
};

class ShrinkingCircleFlow final : public FlowSolution {
public:
    int submanifoldDim() const override { return 1; }
    int ambientDim() const override { return 2; }
    std::pair<double, double> validInterval() const override { return {-1e30, 0.0}; }
    PatchPtr patchAt(double t) const override {
        return makeCirclePatch(RealVec::zero(2), radius(t));
    }
    RealVec velocityAt(double t, const RealVec& u) const override {
        const RealVec x = patchAt(t)->embed(u);
        const double r = radius(t);
        return (-1.0 / (r * r)) * x;
    }
    std::string label() const override { return "circle"; }

private:
    static double radius(double t) {
        if (t >= 0.0) throw DomainError("shrinking circle exists for t < 0");
        return std::sqrt(-2.0 * t);
    }
};

class ShrinkingCylinderFlow final : public FlowSolution {
public:
    explicit ShrinkingCylinderFlow(double zHalf) : zHalf_(zHalf) {}
    int submanifoldDim() const override { return 2; }
    int ambientDim() const override { return 3; }
    std::pair<double, double> validInterval() const override { return {-1e30, 0.0}; }
    PatchPtr patchAt(double t) const override { return makeCylinderPatch(radius(t), zHalf_); }
    RealVec velocityAt(double t, const RealVec& u) const override {
        const RealVec x = patchAt(t)->embed(u);
        const double r = radius(t);
        return (-1.0 / (r * r)) * RealVec{x[0], x[1], 0.0};
    }
    Box paramWindow(double t, const RealVec& centre, double radius) const override {
        (void)t;
        Box w{RealVec{0.0, centre[2] - radius}, RealVec{2.0 * M_PI, centre[2] + radius}};
        return clampWindow(w, patchAt(t)->domain());
    }
    std::string label() const override { return "cylinder"; }

private:
    static double radius(double t) {
        if (t >= 0.0) throw DomainError("shrinking cylinder exists for t < 0");
        return std::sqrt(-2.0 * t);
    }
    double zHalf_;
};

}  // namespace

Box FlowSolution::paramWindow(double t, const RealVec&, double) const {
    return patchAt(t)->domain();
}

FlowPtr makeStaticPlaneFlow(const RealVec& point, const RealVec& normal, double halfExtent) {
    return std::make_shared<StaticPlaneFlow>(point, normal, halfExtent);
}
FlowPtr makeShrinkingSphereFlow() { return std::make_shared<ShrinkingSphereFlow>(); }
FlowPtr makeShrinkingCircleFlow() { return std::make_shared<ShrinkingCircleFlow>(); }
FlowPtr makeShrinkingCylinderFlow(double zHalf) {
    return std::make_shared<ShrinkingCylinderFlow>(zHalf);
}

CentrePath constantPath(const RealVec& c) {
    return CentrePath{
        [c](double) { return c; },
        [c](double) { return RealVec::zero(c.dim()); },
        [](double, double) { return 0.0; },
        "constant",
    };
}

CentrePath linearPath(const RealVec& base, const RealVec& velocity) {
    const double v2 = velocity.normSq();
    return CentrePath{
        [base, velocity](double t) { return base + t * velocity; },
        [velocity](double) { return velocity; },
        [v2](double t, double t0) { return v2 * (t0 - t); },
        "line",
    };
}

CentrePath approachPath(const RealVec& x0, const RealVec& y0, double t0) {
    const double v2 = y0.normSq();
    return CentrePath{
        [x0, y0, t0](double t) { return x0 + (t0 - t) * y0; },
        [y0](double) { return -1.0 * y0; },
        [v2](double t, double t0v) { return v2 * (t0v - t); },
        "approach",
    };
}

CentrePath circularPath(double eps, int dim) {
    return CentrePath{
        [eps, dim](double t) {
            RealVec y(dim);
            y[0] = eps * std::cos(t);
            y[1] = eps * std::sin(t);
            return y;
        },
        [eps, dim](double t) {
            RealVec y(dim);
            y[0] = -eps * std::sin(t);
            y[1] = eps * std::cos(t);
            return y;
        },
        [eps](double t, double t0) { return eps * eps * (t0 - t); },
        "curved",
    };
}

CentrePath parabolicPath(double eps, int dim) {
    return CentrePath{
        [eps, dim](double t) {
            RealVec y(dim);
            y[0] = eps * t;
            y[1] = eps * t * t;
            return y;
        },
        [eps, dim](double t) {
            RealVec y(dim);
            y[0] = eps;
            y[1] = 2.0 * eps * t;
            return y;
        },
        nullptr,
        "parabolic",
    };
}

double pathSpeedSqIntegral(const CentrePath& path, double t, double t0) {
    if (path.speedSqIntegral) return path.speedSqIntegral(t, t0);
    const GaussRule& rule = gaussRule(16);
    // Two panels of 16 nodes across [t, t0].
    double sum = 0.0;
    const double mid = 0.5 * (t + t0);
    for (int panel = 0; panel < 2; ++panel) {
        const double a = panel == 0 ? t : mid;
        const double b = panel == 0 ? mid : t0;
        const double half = 0.5 * (b - a);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double tau = a + half * (1.0 + rule.nodes[i]);
            sum += half * rule.weights[i] * path.yPrime(tau).normSq();
        }
    }
    return sum;
}

IntegralResult gaussianDensity(const ParametricPatch& patch, const RealVec& x0,
                               double t0scale, const QuadratureSpec& spec, double relTol,
                               const Box* window, bool checkTail) {
    if (t0scale <= 0.0) throw DomainError("Gaussian scale must be positive");
    const int k = patch.paramDim();
    const PatchIntegrand fn = [x0, k, t0scale](const PatchPoint& pt) {
        return gaussianWeightValue(k, t0scale, distSq(pt.x, x0));
    };
    IntegralResult r = integratePatch(patch, fn, spec, relTol, window);

    if (checkTail) {
        // Truncation estimate on integration faces strictly inside the chart
        // domain: max integrand on the face times face measure times decay
        // length.
        const Box dom = patch.domain();
        const Box box = window ? *window : dom;
        double tail = 0.0;
        for (int a = 0; a < box.dim(); ++a) {
            for (int side = 0; side < 2; ++side) {
                const double faceCoord = side ? box.hi[a] : box.lo[a];
                const double domCoord = side ? dom.hi[a] : dom.lo[a];
                if (std::abs(faceCoord - domCoord) <= 1e-12 * (1.0 + std::abs(domCoord)))
                    continue;  // chart boundary (seam), not a truncation
                double maxVal = 0.0;
                double faceMeasure = 1.0;
                const int samplesPerAxis = 9;
                int nPts = 1;
                for (int b = 0; b < box.dim(); ++b)
                    if (b != a) {
                        faceMeasure *= box.width(b);
                        nPts *= samplesPerAxis;
                    }
                for (int p = 0; p < nPts; ++p) {
                    RealVec u(box.dim());
                    u[a] = faceCoord;
                    int rem = p;
                    for (int b = 0; b < box.dim(); ++b) {
                        if (b == a) continue;
                        const int idx = rem % samplesPerAxis;
                        rem /= samplesPerAxis;
                        u[b] = box.lo[b] + box.width(b) * idx / (samplesPerAxis - 1);
                    }
                    PatchPoint pt;
                    pt.patch = &patch;
                    pt.u = u;
                    pt.x = patch.embed(u);
                    pt.jac = patch.jacobian(u);
                    maxVal = std::max(maxVal, std::abs(fn(pt)) * areaElement(pt.jac));
                }
                tail += maxVal * faceMeasure * std::sqrt(4.0 * M_PI * t0scale);
            }
        }
        r.errorBound += tail;
    }
    if (spec.targetTol > 0 && r.errorBound > spec.targetTol * (1.0 + std::abs(r.value)))
        throw ToleranceNotMetError("Gaussian density truncation above request", r.errorBound);
    return r;
}

double movingDensity(const FlowSolution& flow, const GaussianWeight& weight, double t,
                     const QuadratureSpec& spec) {
    const double tau = weight.t0 - t;
    if (tau <= 0.0) throw DomainError("moving density needs t < t0");
    const auto [lo, hi] = flow.validInterval();
    if (t <= lo || t >= hi) throw DomainError("time outside the flow interval");
    const RealVec yc = weight.centre.y(t);
    const PatchPtr patch = flow.patchAt(t);
    const Box window = flow.paramWindow(t, yc, truncationRadius(tau));
    return gaussianDensity(*patch, yc, tau, spec, 1e-9, &window).value;
}

McfRhs mcfRhs(const FlowSolution& flow, const GaussianWeight& weight, double t,
              const QuadratureSpec& spec) {
    const double tau = weight.t0 - t;
    if (tau <= 0.0) throw DomainError("moving density needs t < t0");
    const RealVec yc = weight.centre.y(t);
    const RealVec yp = weight.centre.yPrime(t);
    const PatchPtr patch = flow.patchAt(t);
    const Box window = flow.paramWindow(t, yc, truncationRadius(tau));
    const int k = weight.k;

    const PatchIntegrand dissipationFn = [&, k, tau](const PatchPoint& pt) {
        const RealVec h = pt.patch->meanCurvature(pt.u);
        const RealVec v = pt.x - yc - tau * yp;
        const RealVec vPerp = normalPart(pt.jac, v);
        const RealVec z = h + (1.0 / (2.0 * tau)) * vPerp;
        return z.normSq() * gaussianWeightValue(k, tau, distSq(pt.x, yc));
    };
    const PatchIntegrand excessFn = [&, k, tau](const PatchPoint& pt) {
        const RealVec ypPerp = normalPart(pt.jac, yp);
        return 0.25 * ypPerp.normSq() * gaussianWeightValue(k, tau, distSq(pt.x, yc));
    };

    McfRhs rhs;
    rhs.dissipation = integratePatch(*patch, dissipationFn, spec, 1e-9, &window).value;
    rhs.excess = integratePatch(*patch, excessFn, spec, 1e-9, &window).value;
    return rhs;
}

double correctedQuantity(const FlowSolution& flow, const GaussianWeight& weight, double t,
                         const QuadratureSpec& spec) {
    const double integral = pathSpeedSqIntegral(weight.centre, t, weight.t0);
    return std::exp(0.25 * integral) * movingDensity(flow, weight, t, spec);
}

PatchPtr makeShrinkerPlane(double halfExtent) {
    return makePlanePatch(RealVec::zero(3), RealVec{0, 0, 1}, halfExtent, "shrinker-plane");
}
PatchPtr makeShrinkerCircle() { return makeCirclePatch(RealVec::zero(2), std::sqrt(2.0)); }
PatchPtr makeShrinkerSphere() { return makeSpherePolarPatch(RealVec::zero(3), 2.0); }
PatchPtr makeShrinkerCylinder(double zHalf) {
    return makeCylinderPatch(std::sqrt(2.0), zHalf);
}

double shrinkerResidual(const ParametricPatch& patch) {
    const Box box = patch.domain();
    double worst = 0.0;
    const int n = 5;
    const int k = patch.paramDim();
    const int total = k == 1 ? n : n * n;
    for (int p = 0; p < total; ++p) {
        RealVec u(k);
        int rem = p;
        for (int a = 0; a < k; ++a) {
            const int i = rem % n;
            rem /= n;
            u[a] = box.lo[a] + box.width(a) * (i + 0.5) / n;
        }
        const RealVec x = patch.embed(u);
        const RealVec h = patch.meanCurvature(u);
        const RealVec xPerp = normalPart(patch.jacobian(u), x);
        worst = std::max(worst, (h + 0.5 * xPerp).norm());
    }
    return worst;
}

EntropyScan entropyScan(const ParametricPatch& shrinker, const RealVec& y, double a,
                        const std::vector<double>& sGrid, const QuadratureSpec& spec,
                        double identityTol) {
    if (shrinkerResidual(shrinker) > 1e-10)
        throw DomainError("patch is not a self-shrinker to 1e-10");
    const int k = shrinker.paramDim();

    EntropyScan scan;
    scan.grid = sGrid;
    auto scaleAt = [a](double s) {
        const double sc = 1.0 + a * s * s;
        if (sc <= 0.0) throw DomainError("scale 1 + a s^2 must stay positive");
        return sc;
    };
    auto area = [&](double s) {
        return gaussianDensity(shrinker, s * y, scaleAt(s), spec, 1e-10, nullptr, false).value;
    };

    for (double s : sGrid) {
        const double sc = scaleAt(s);
        scan.gaussianArea.push_back(area(s));
        const PatchIntegrand rhsFn = [&, s, sc](const PatchPoint& pt) {
            const RealVec v = a * s * pt.x + y;
            const RealVec vPerp = normalPart(pt.jac, v);
            return vPerp.normSq() * gaussianWeightValue(k, sc, distSq(pt.x, s * y));
        };
        const double integral = integratePatch(shrinker, rhsFn, spec, 1e-10).value;
        scan.rhsClosedForm.push_back(-s / (2.0 * sc * sc) * integral);
    }

    scan.identity = true;
    for (std::size_t i = 0; i < sGrid.size(); ++i) {
        const double s = sGrid[i];
        double fd = std::numeric_limits<double>::quiet_NaN();
        if (s > 0.0) {
            const double d = std::min(0.25 * s, 0.01);
            fd = (area(s + d) - area(s - d)) / (2.0 * d);
            const double res =
                std::abs(fd - scan.rhsClosedForm[i]) / (1.0 + std::abs(scan.rhsClosedForm[i]));
            scan.residual.push_back(res);
            if (res > identityTol) scan.identity = false;
        } else {
            scan.residual.push_back(0.0);
        }
        scan.fdDerivative.push_back(fd);
    }

    scan.nonincreasing = true;
    for (std::size_t i = 1; i < scan.gaussianArea.size(); ++i)
        if (scan.gaussianArea[i] >
            scan.gaussianArea[i - 1] + 1e-8 * (1.0 + scan.gaussianArea[i - 1]))
            scan.nonincreasing = false;
    scan.maxAtZero = true;
    for (double f : scan.gaussianArea)
        if (f > scan.gaussianArea.front() + 1e-8 * (1.0 + scan.gaussianArea.front()))
            scan.maxAtZero = false;
    scan.verdict = scan.nonincreasing && scan.maxAtZero && scan.identity;
    return scan;
}

McfSeries mcfSeries(const FlowSolution& flow, const GaussianWeight& weight,
                    const std::vector<double>& times, const QuadratureSpec& spec,
                    double identityTol, double monoSlack) {
    McfSeries series;
    series.grid = times;
    for (double t : times) {
        const double tau = weight.t0 - t;
        series.movingDensity.push_back(movingDensity(flow, weight, t, spec));
        const McfRhs rhs = mcfRhs(flow, weight, t, spec);
        series.dissipation.push_back(rhs.dissipation);
        series.excess.push_back(rhs.excess);
        const double d = std::min(0.02 * tau, 0.01);
        const double f1 = (movingDensity(flow, weight, t + d, spec) -
                           movingDensity(flow, weight, t - d, spec)) /
                          (2.0 * d);
        const double f2 = (movingDensity(flow, weight, t + 0.5 * d, spec) -
                           movingDensity(flow, weight, t - 0.5 * d, spec)) /
                          d;
        const double fd = (4.0 * f2 - f1) / 3.0;
        series.fdDerivative.push_back(fd);
        series.correctedQuantity.push_back(correctedQuantity(flow, weight, t, spec));
        const double rhsVal = -rhs.dissipation + rhs.excess;
        series.residual.push_back(std::abs(fd - rhsVal) / (1.0 + std::abs(rhsVal)));
    }
    series.identity = true;
    for (double r : series.residual)
        if (r > identityTol) series.identity = false;
    series.correctedMonotone = true;
    for (std::size_t i = 1; i < series.correctedQuantity.size(); ++i)
        if (series.correctedQuantity[i] >
            series.correctedQuantity[i - 1] +
                monoSlack * (1.0 + std::abs(series.correctedQuantity[i - 1])))
            series.correctedMonotone = false;
    for (double r : series.residual) series.worstResidual = std::max(series.worstResidual, r);
    series.verdict = series.identity && series.correctedMonotone;
    return series;
}

}  // namespace mcm
