#include "mcmono/heatflow_mono.hpp"

#include <algorithm>
#include <cmath>

#include <array>

#include "mcmono/catalog.hpp"
#include "mcmono/gauss.hpp"

namespace mcm {

namespace {

double heatWeightValue(int m, double tau, double dist2) {
    return std::pow(4.0 * M_PI * tau, -0.5 * (m - 2.0)) * std::exp(-dist2 / (4.0 * tau));
}

class ZeroHeatFlow final : public HeatFlowSolution {
public:
    explicit ZeroHeatFlow(int m) : m_(m) {}
    int domainDim() const override { return m_; }
    int targetDim() const override { return 1; }
    std::pair<double, double> validInterval() const override { return {-1e30, 1e30}; }
    RealVec value(const RealVec&, double) const override { return RealVec::zero(1); }
    RealVec timeDerivative(const RealVec&, double) const override { return RealVec::zero(1); }
    SmallMat gradient(const RealVec&, double) const override { return SmallMat(m_, 1); }
    double gradientBound() const override { return 0.0; }
    double supportRadius(double) const override { return 0.0; }
    std::string label() const override { return "zero"; }

private:
    int m_;
};

class LinearHeatFlow final : public HeatFlowSolution {
public:
    explicit LinearHeatFlow(RealVec a) : a_(std::move(a)) {
        grad_ = SmallMat(a_.dim(), 1);
        for (int i = 0; i < a_.dim(); ++i) grad_(i, 0) = a_[i];
    }
    int domainDim() const override { return a_.dim(); }
    int targetDim() const override { return 1; }
    std::pair<double, double> validInterval() const override { return {-1e30, 1e30}; }
    RealVec value(const RealVec& x, double) const override { return RealVec{dot(a_, x)}; }
    RealVec timeDerivative(const RealVec&, double) const override { return RealVec::zero(1); }
    SmallMat gradient(const RealVec&, double) const override { return grad_; }
    double gradientBound() const override { return a_.norm(); }
    double supportRadius(double) const override { return 0.0; }
    std::string label() const override { return "linear"; }

private:
    RealVec a_;
    SmallMat grad_;
};

class HeatKernelFlow final : public HeatFlowSolution {
public:
    HeatKernelFlow(double tShift, int m) : ts_(tShift), m_(m) {}
    int domainDim() const override { return m_; }
    int targetDim() const override { return 1; }
    std::pair<double, double> validInterval() const override { return {ts_ + 0.05, 1e30}; }
    RealVec value(const RealVec& x, double t) const override {
        return RealVec{kernel(x.normSq(), t - ts_)};
    }
    RealVec timeDerivative(const RealVec& x, double t) const override {
        const double sg = t - ts_;
        const double u = kernel(x.normSq(), sg);
        return RealVec{u * (x.normSq() / (4.0 * sg * sg) - 0.5 * m_ / sg)};
    }
    SmallMat gradient(const RealVec& x, double t) const override {
        const double sg = t - ts_;
        const double u = kernel(x.normSq(), sg);
        SmallMat g(m_, 1);
        for (int i = 0; i < m_; ++i) g(i, 0) = -x[i] / (2.0 * sg) * u;
        return g;
    }
    double gradientBound() const override {
        // max of r/(2 sg) * kernel over r at the earliest admissible time
        const double sg = 0.05;
        return std::sqrt(2.0 * sg) / (2.0 * sg) * std::pow(4.0 * M_PI * sg, -0.5 * m_) *
               std::exp(-0.5);
    }
    double supportRadius(double t) const override { return 11.0 * std::sqrt(t - ts_); }
    void gaussianFactor(double t, double& coeff, RealVec& centre) const override {
        coeff = 0.5 / (t - ts_);  // |grad u|^2 ~ poly * H^2, H^2 = e^{-r^2/(2 sg)}
        centre = RealVec::zero(m_);
    }
    std::string label() const override { return "kernel"; }

private:
    double kernel(double r2, double sg) const {
        return std::pow(4.0 * M_PI * sg, -0.5 * m_) * std::exp(-r2 / (4.0 * sg));
    }
    double ts_;
    int m_;
};

// Tensor Gauss-Hermite integral of fn over R^m, with the rule centred and
// scaled on the combined quadratic exponent of the weight (coefficient
// 1/(4 tau) about y) and the flow gradient factor. fn evaluates the full
// integrand including every exponential; the rule weight is divided back
// out, so integrands that share the matched quadratic are integrated to
// machine precision.
double gaussHermiteIntegral(const std::function<double(const RealVec&)>& fn, const RealVec& y,
                            double tau, double uCoeff, const RealVec& uCentre, int m) {
    const double a = 1.0 / (4.0 * tau) + uCoeff;
    const double s = 1.0 / std::sqrt(a);
    RealVec mu = (1.0 / (4.0 * tau * a)) * y + (uCoeff / a) * uCentre;
    const GaussRule& rule = hermiteRule(20);
    const int n = static_cast<int>(rule.nodes.size());
    double total = 0.0;
    std::array<int, 3> idx{};
    for (;;) {
        RealVec x = mu;
        double w = 1.0, z2 = 0.0;
        for (int d = 0; d < m; ++d) {
            const double z = rule.nodes[idx[d]];
            x[d] += s * z;
            w *= rule.weights[idx[d]];
            z2 += z * z;
        }
        const double f = fn(x);
        if (f != 0.0) total += w * f * std::exp(z2);
        int d = 0;
        while (d < m && ++idx[d] == n) idx[d++] = 0;
        if (d == m) break;
    }
    return total * std::pow(s, m);
}

}  // namespace

HeatFlowPtr makeZeroHeatFlow(int m) { return std::make_shared<ZeroHeatFlow>(m); }
HeatFlowPtr makeLinearHeatFlow(const RealVec& a) {
    return std::make_shared<LinearHeatFlow>(a);
}
HeatFlowPtr makeHeatKernelFlow(double tShift, int m) {
    return std::make_shared<HeatKernelFlow>(tShift, m);
}

double weightedEnergy(const HeatFlowSolution& flow, const HeatWeight& weight, double t,
                      const QuadratureSpec& spec, double relTol) {
    (void)spec;
    (void)relTol;
    const double tau = weight.t0 - t;
    if (tau <= 0.0) throw DomainError("weighted energy needs t < t0");
    const auto [lo, hi] = flow.validInterval();
    if (t <= lo || t >= hi) throw DomainError("time outside the flow interval");
    const int m = flow.domainDim();
    // m = 2 makes the weight exponent vanish (conformal normalization);
    // allowed but the catalog ships m = 3 flows only.
    if (m < 2) throw DomainError("domain dimension must be at least 2");
    const RealVec y = weight.centre.y(t);
    double uCoeff;
    RealVec uCentre;
    flow.gaussianFactor(t, uCoeff, uCentre);
    return gaussHermiteIntegral(
        [&flow, y, tau, m, t](const RealVec& x) {
            const double g2 = flow.gradient(x, t).frobeniusSq();
            return g2 == 0.0 ? 0.0 : g2 * heatWeightValue(m, tau, distSq(x, y));
        },
        y, tau, uCoeff, uCentre, m);
}

HeatRhs heatRhs(const HeatFlowSolution& flow, const HeatWeight& weight, double t,
                const QuadratureSpec& spec) {
    const double tau = weight.t0 - t;
    if (tau <= 0.0) throw DomainError("weighted energy needs t < t0");
    (void)spec;
    const int m = flow.domainDim();
    const RealVec y = weight.centre.y(t);
    const RealVec yp = weight.centre.yPrime(t);
    double uCoeff;
    RealVec uCentre;
    flow.gaussianFactor(t, uCoeff, uCentre);

    HeatRhs rhs;
    rhs.dissipation = gaussHermiteIntegral(
        [&flow, y, yp, tau, m, t](const RealVec& x) {
            const SmallMat g = flow.gradient(x, t);
            const RealVec ut = flow.timeDerivative(x, t);
            const RealVec v = (1.0 / (2.0 * tau)) * (x - y - tau * yp);
            const RealVec z = ut - g.applyTransposed(v);
            const double z2 = z.normSq();
            return z2 == 0.0 ? 0.0 : 2.0 * z2 * heatWeightValue(m, tau, distSq(x, y));
        },
        y, tau, uCoeff, uCentre, m);
    rhs.excess = gaussHermiteIntegral(
        [&flow, y, yp, tau, m, t](const RealVec& x) {
            const double e = flow.gradient(x, t).applyTransposed(yp).normSq();
            return e == 0.0 ? 0.0 : 0.5 * e * heatWeightValue(m, tau, distSq(x, y));
        },
        y, tau, uCoeff, uCentre, m);
    return rhs;
}

double heatCorrectedQuantity(const HeatFlowSolution& flow, const HeatWeight& weight, double t,
                             const QuadratureSpec& spec) {
    const double integral = pathSpeedSqIntegral(weight.centre, t, weight.t0);
    return std::exp(0.5 * integral) * weightedEnergy(flow, weight, t, spec);
}

HeatSeries heatSeries(const HeatFlowSolution& flow, const HeatWeight& weight,
                      const std::vector<double>& times, const QuadratureSpec& spec,
                      double identityTol, double monoSlack) {
    HeatSeries series;
    series.grid = times;
    for (double t : times) {
        const double tau = weight.t0 - t;
        series.weightedEnergy.push_back(weightedEnergy(flow, weight, t, spec));
        const HeatRhs rhs = heatRhs(flow, weight, t, spec);
        series.dissipation.push_back(rhs.dissipation);
        series.excess.push_back(rhs.excess);
        const double d = std::min(0.02 * tau, 0.01);
        const double f1 = (weightedEnergy(flow, weight, t + d, spec) -
                           weightedEnergy(flow, weight, t - d, spec)) /
                          (2.0 * d);
        const double f2 = (weightedEnergy(flow, weight, t + 0.5 * d, spec) -
                           weightedEnergy(flow, weight, t - 0.5 * d, spec)) /
                          d;
        const double fd = (4.0 * f2 - f1) / 3.0;
        series.fdDerivative.push_back(fd);
        series.correctedQuantity.push_back(heatCorrectedQuantity(flow, weight, t, spec));
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
