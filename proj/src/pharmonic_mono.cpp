#include "mcmono/pharmonic_mono.hpp"

#include <algorithm>
#include <cmath>

#include "mcmono/catalog.hpp"
#include "mcmono/gauss.hpp"

namespace mcm {

namespace {

class ConstantMap final : public MapSolution {
public:
    ConstantMap(int m, RealVec value, double p) : m_(m), v_(std::move(value)), p_(p) {}
    int domainDim() const override { return m_; }
    int targetDim() const override { return v_.dim(); }
    double p() const override { return p_; }
    RealVec value(const RealVec&) const override { return v_; }
    SmallMat gradient(const RealVec&) const override { return SmallMat(m_, v_.dim()); }
    std::string label() const override { return "constant"; }

private:
    int m_;
    RealVec v_;
    double p_;
};

class LinearMap final : public MapSolution {
public:
    LinearMap(SmallMat a, double p) : a_(a), p_(p) {
        // gradient rows are domain-indexed: grad(i, alpha) = A(alpha, i).
        grad_ = SmallMat(a_.cols(), a_.rows());
        for (int i = 0; i < grad_.rows(); ++i)
            for (int al = 0; al < grad_.cols(); ++al) grad_(i, al) = a_(al, i);
    }
    int domainDim() const override { return a_.cols(); }
    int targetDim() const override { return a_.rows(); }
    double p() const override { return p_; }
    RealVec value(const RealVec& x) const override { return a_.apply(x); }
    SmallMat gradient(const RealVec&) const override { return grad_; }
    std::string label() const override { return "linear"; }

private:
    SmallMat a_;  // n x m
    SmallMat grad_;
    double p_;
};

class RadialMap final : public MapSolution {
public:
    RadialMap(int m, double p) : m_(m), p_(p) {}
    int domainDim() const override { return m_; }
    int targetDim() const override { return m_; }
    double p() const override { return p_; }
    RealVec value(const RealVec& x) const override {
        const double r = x.norm();
        return (1.0 / r) * x;
    }
    SmallMat gradient(const RealVec& x) const override {
        const double r = x.norm();
        const double r3 = r * r * r;
        SmallMat g(m_, m_);
        for (int i = 0; i < m_; ++i)
            for (int al = 0; al < m_; ++al)
                g(i, al) = (i == al ? 1.0 / r : 0.0) - x[al] * x[i] / r3;
        return g;
    }
    std::vector<RealVec> singularPoints() const override { return {RealVec::zero(m_)}; }
    std::string label() const override { return "radial"; }

private:
    int m_;
    double p_;
};

// |grad u|^p with the same critical-set convention as gradientWeight.
double energyDensity(double gradNormSq, double p) {
    if (gradNormSq < 1e-28) return 0.0;
    if (p == 2.0) return gradNormSq;
    return std::pow(gradNormSq, 0.5 * p);
}

// Integration box containing E_s with the map's singular points aligned to
// cell corners (even cell counts keep them on the lattice at every depth).
Box energyBox(const MapSolution& map, const QBallFamily& family, double s) {
    const auto [c, r] = family.centreAndRadius(s);
    const int m = map.domainDim();
    const auto sing = map.singularPoints();
    if (sing.empty()) {
        Box box{c, c};
        for (int a = 0; a < m; ++a) {
            box.lo[a] = c[a] - r - 0.05;
            box.hi[a] = c[a] + r + 0.05;
        }
        return box;
    }
    const RealVec p0 = sing.front();
    double half = 0.0;
    for (int a = 0; a < m; ++a)
        half = std::max(half, std::abs(c[a] - p0[a]) + r + 0.05);
    Box box{p0, p0};
    for (int a = 0; a < m; ++a) {
        box.lo[a] = p0[a] - half;
        box.hi[a] = p0[a] + half;
    }
    return box;
}

QuadratureSpec energySpec(const MapSolution& map, const QuadratureSpec& spec) {
    QuadratureSpec s = spec;
    if (s.cellsPerAxis % 2) ++s.cellsPerAxis;  // keep singular points on corners
    for (const auto& p : map.singularPoints()) s.gradeCenters.push_back(p);
    return s;
}

// Integral of fn over the ball B(centre, radius) in R^3, aligned to the
// geometry: integrable point singularities inside the ball are carved out
// into polar sub-integrals, and the remaining radial extents are exact
// ray-sphere intersections (no indicator quadrature at all). The polar axis
// points at the hole so its silhouette is a theta = const circle, and the
// tanh-sinh theta rule absorbs the square-root kink there.
double ballIntegral(const std::function<double(const RealVec&)>& fn, const RealVec& centre,
                    double radius, const std::vector<RealVec>& singularities,
                    double* errOut = nullptr) {
    double total = 0.0, err = 0.0;
    const TanhSinhRule& ts = tanhSinhRule();
    const GaussRule& rRule = gaussRule(14);

    RealVec hole(3);
    double rho = 0.0;
    bool haveHole = false;
    for (const auto& p : singularities) {
        if ((p - centre).norm() < radius) {
            hole = p;
            rho = 0.45 * (radius - (p - centre).norm());
            haveHole = true;
            break;  // catalog maps have at most one interior singularity
        }
    }

    if (haveHole) {
        // Polar integral over B(hole, rho): r^2 regularizes the integrand,
        // tanh-sinh in r absorbs fractional powers.
        auto holeRun = [&](int nTheta, int nPhi, bool coarseR) {
            const GaussRule& tRule = gaussRule(nTheta);
            double sum = 0.0;
            for (std::size_t ir = 0; ir < ts.nodes.size(); ++ir) {
                if (coarseR && ir % 2 != 0) continue;
                const double r = 0.5 * rho * (1.0 + ts.nodes[ir]);
                if (r <= 0.0) continue;
                const double wr = (coarseR ? 2.0 : 1.0) * 0.5 * rho * ts.weights[ir];
                double shell = 0.0;
                for (int it = 0; it < nTheta; ++it) {
                    const double th = 0.5 * M_PI * (1.0 + tRule.nodes[it]);
                    const double wt = 0.5 * M_PI * tRule.weights[it] * std::sin(th);
                    double ring = 0.0;
                    for (int ip = 0; ip < nPhi; ++ip) {
                        const double ph = 2.0 * M_PI * ip / nPhi;
                        RealVec x = hole;
                        x[0] += r * std::sin(th) * std::cos(ph);
                        x[1] += r * std::sin(th) * std::sin(ph);
                        x[2] += r * std::cos(th);
                        ring += fn(x);
                    }
                    shell += wt * ring * (2.0 * M_PI / nPhi);
                }
                sum += wr * shell * r * r;
            }
            return sum;
        };
        const double fine = holeRun(12, 24, false);
        const double coarse = holeRun(8, 16, true);
        total += fine;
        err += std::abs(fine - coarse);
    }

    // Frame with the polar axis pointing from the centre towards the hole.
    const RealVec d = haveHole ? hole - centre : RealVec{0.0, 0.0, 1.0};
    const double dist = haveHole ? d.norm() : 0.0;
    RealVec ez = dist > 1e-13 ? normalized(d) : RealVec{0.0, 0.0, 1.0};
    RealVec tmp = std::abs(ez[0]) < 0.9 ? RealVec{1, 0, 0} : RealVec{0, 1, 0};
    RealVec ex = normalized(tmp - dot(tmp, ez) * ez);
    RealVec ey{ez[1] * ex[2] - ez[2] * ex[1], ez[2] * ex[0] - ez[0] * ex[2],
               ez[0] * ex[1] - ez[1] * ex[0]};

    auto raySegments = [&](double cosTheta, double& cut0, double& cut1) {
        // Intersection of {centre + r w} with the hole sphere.
        cut0 = radius;
        cut1 = radius;
        if (!haveHole) return;
        const double b = -dist * cosTheta;  // <centre - hole, w>
        const double disc = b * b - (dist * dist - rho * rho);
        if (disc <= 0.0) return;
        const double sq = std::sqrt(disc);
        cut0 = std::clamp(-b - sq, 0.0, radius);
        cut1 = std::clamp(-b + sq, 0.0, radius);
    };

    auto mainRun = [&](bool coarse) {
        const int nPhi = coarse ? 16 : 24;
        double sum = 0.0;
        // theta panels: tanh-sinh beside the silhouette kink of the hole,
        // composite Gauss (exact for the smooth structure) elsewhere.
        const bool silhouette = haveHole && dist > rho;
        std::vector<std::pair<double, double>> panels;
        if (silhouette) {
            const double thetaSil = std::asin(std::min(1.0, rho / dist));
            panels.push_back({0.0, thetaSil});
            panels.push_back({thetaSil, M_PI});
        } else {
            const int nPanels = 6;
            for (int i = 0; i < nPanels; ++i)
                panels.push_back({M_PI * i / nPanels, M_PI * (i + 1) / nPanels});
        }
        const GaussRule& gRule = gaussRule(coarse ? 8 : 16);
        for (const auto& [t0, t1] : panels) {
            const std::size_t nNodes = silhouette ? ts.nodes.size() : gRule.nodes.size();
            for (std::size_t it = 0; it < nNodes; ++it) {
                if (silhouette && coarse && it % 2 != 0) continue;
                const double node = silhouette ? ts.nodes[it] : gRule.nodes[it];
                const double baseW = silhouette ? ts.weights[it] : gRule.weights[it];
                const double th = t0 + 0.5 * (t1 - t0) * (1.0 + node);
                const double wt = (silhouette && coarse ? 2.0 : 1.0) * 0.5 * (t1 - t0) *
                                  baseW * std::sin(th);
                double cut0, cut1;
                raySegments(std::cos(th), cut0, cut1);
                double ring = 0.0;
                for (int ip = 0; ip < nPhi; ++ip) {
                    const double ph = 2.0 * M_PI * ip / nPhi;
                    RealVec w = std::sin(th) * std::cos(ph) * ex +
                                std::sin(th) * std::sin(ph) * ey + std::cos(th) * ez;
                    double radial = 0.0;
                    const double segs[2][2] = {{0.0, cut0}, {cut1, radius}};
                    for (const auto& seg : segs) {
                        if (seg[1] - seg[0] < 1e-14 * radius) continue;
                        const double half = 0.5 * (seg[1] - seg[0]);
                        for (std::size_t ir = 0; ir < rRule.nodes.size(); ++ir) {
                            const double r = seg[0] + half * (1.0 + rRule.nodes[ir]);
                            radial += half * rRule.weights[ir] * r * r * fn(centre + r * w);
                        }
                    }
                    ring += radial;
                }
                sum += wt * ring * (2.0 * M_PI / nPhi);
            }
        }
        return sum;
    };
    const double fine = mainRun(false);
    const double coarse = mainRun(true);
    total += fine;
    err += std::abs(fine - coarse);
    if (errOut) *errOut = err;
    return total;
}

double rawEnergy(const MapSolution& map, const QBallFamily& family, double s,
                 const QuadratureSpec& spec) {
    (void)spec;
    const auto [c, r] = family.centreAndRadius(s);
    const double p = map.p();
    return ballIntegral(
        [&map, p](const RealVec& x) { return energyDensity(map.gradient(x).frobeniusSq(), p); },
        c, r, map.singularPoints());
}

// Generic-route cross-check of the ball-aligned integrator: the sub-level
// engine over the bounding box with the same integrand.
double rawEnergyViaSublevel(const MapSolution& map, const QBallFamily& family, double s,
                            const QuadratureSpec& spec) {
    const Box box = energyBox(map, family, s);
    const PatchPtr domain = makeBoxPatch(box, "energy-domain");
    const double p = map.p();
    const PatchIntegrand fn = [&map, p](const PatchPoint& pt) {
        return energyDensity(map.gradient(pt.x).frobeniusSq(), p);
    };
    return integrateSublevel(*domain, family.asField(), s, fn, energySpec(map, spec)).value;
}

struct SphereTerms {
    double a = 0.0;
    double b = 0.0;
    double aMin = 0.0;
};

SphereTerms sphereTermIntegrals(const MapSolution& map, const QBallFamily& family, double s,
                                const QuadratureSpec& spec) {
    const auto [c, r] = family.centreAndRadius(s);
    const RealVec y = family.y();
    const double p = map.p();
    const double q = family.q();

    SphereTerms terms;
    double aMin = 0.0;
    const auto aFn = [&](const RealVec& x) {
        const SmallMat g = map.gradient(x);
        const double g2 = g.frobeniusSq();
        const double yDotU = g.applyTransposed(y).normSq();
        const double v = gradientWeight(g2, p) * (y.normSq() * g2 - yDotU);
        aMin = std::min(aMin, v);
        return v;
    };
    const auto bFn = [&](const RealVec& x) {
        const SmallMat g = map.gradient(x);
        const double g2 = g.frobeniusSq();
        const double xDotU = g.applyTransposed(x).normSq();
        const double yDotU = g.applyTransposed(y).normSq();
        return gradientWeight(g2, p) * (p * xDotU - (p - q) * s * s * yDotU);
    };
    terms.a = sphereIntegral(c, r, aFn, spec);
    terms.b = sphereIntegral(c, r, bFn, spec);
    terms.aMin = aMin;
    return terms;
}

PatchIntegrand bulkIntegrandFor(const MapSolution& map, const QBallFamily& family) {
    const RealVec y = family.y();
    const double p = map.p();
    const double q = family.q();
    const double m = map.domainDim();
    return [&map, family, y, p, q, m](const PatchPoint& pt) {
        const double f = family.levelFunctionOrInf(pt.x);
        if (!(f > 0.0) || !std::isfinite(f)) return 0.0;
        const SmallMat g = map.gradient(pt.x);
        const double g2 = g.frobeniusSq();
        const double w = gradientWeight(g2, p);
        if (w == 0.0) return 0.0;
        const double denom = pt.x.normSq() + (q - 1.0) * f * f * y.normSq();
        const double yDotU = g.applyTransposed(y).normSq();
        const double xDotU = g.applyTransposed(pt.x).normSq();
        const double term1 =
            q * std::pow(f, 0.5 * (p - m + 4.0)) * (y.normSq() * g2 - yDotU) / denom;
        const double term2 = std::pow(f, 0.5 * (p - m)) *
                             (p * xDotU - (p - q) * f * f * yDotU) / denom;
        return w * (term1 + term2);
    };
}

double rawBulkAt(const MapSolution& map, const QBallFamily& family, double level,
                 const QuadratureSpec& spec) {
    (void)spec;
    const auto [c, r] = family.centreAndRadius(level);
    const PatchIntegrand inner = bulkIntegrandFor(map, family);
    // The bulk weight f^((p-m)/2) is singular at the family vertex for any
    // map, so the vertex is always carved.
    std::vector<RealVec> sing = map.singularPoints();
    bool haveVertex = false;
    for (const auto& p0 : sing)
        if (p0.norm() < 1e-12) haveVertex = true;
    if (!haveVertex) sing.insert(sing.begin(), RealVec::zero(map.domainDim()));
    const PatchPtr shim = makeBoxPatch(Box{RealVec{-1, -1, -1}, RealVec{1, 1, 1}}, "shim");
    return ballIntegral(
        [&](const RealVec& x) {
            PatchPoint q;
            q.patch = shim.get();
            q.u = x;
            q.x = x;
            q.jac = shim->jacobian(x);
            return inner(q);
        },
        c, r, sing);
}

// Richardson-extrapolated central difference on a wide relative step: the
// ratio is analytic in s, so the fourth-order combination is accurate while
// keeping quadrature noise amplification low.
template <typename Fn>
double fdDerivative(const Fn& f, double s) {
    const double d = 0.1 * s;
    const double f1 = (f(s + d) - f(s - d)) / (2.0 * d);
    const double f2 = (f(s + 0.5 * d) - f(s - 0.5 * d)) / d;
    return (4.0 * f2 - f1) / 3.0;
}

// Smooth partition of unity on the sphere: weight as a function of the
// |z-component|/R, 1 below 0.55, 0 above 0.70, C-infinity in between.
double smoothStep(double tau) {
    const double a = 0.30, b = 0.78;
    if (tau <= a) return 1.0;
    if (tau >= b) return 0.0;
    auto bump = [](double xi) { return xi > 0.0 ? std::exp(-1.0 / xi) : 0.0; };
    const double up = bump((b - tau) / (b - a));
    const double down = bump((tau - a) / (b - a));
    return up / (up + down);
}

}
    RealVec embed(const RealVec& u) const override {
        const double st = std::sin(u[0]), ct = std::cos(u[0]);
        const double cp = std::cos(u[1]), sp = std::sin(u[1]);
        RealVec local{ct, st * cp, st * sp};
        RealVec x = c_;
        for (int i = 0; i < 3; ++i) x[(axis_ + i) % 3] += r_ * local[i];
        return x;
    }
    SmallMat jacobian(const RealVec& u) const override {
        const double st = std::sin(u[0]), ct = std::cos(u[0]);
        const double cp = std::cos(u[1]), sp = std::sin(u[1]);
        RealVec dTheta{-st, ct * cp, ct * sp};
        RealVec dPhi{0.0, -st * sp, st * cp};
        SmallMat j(2, 3);
        RealVec r0(3), r1(3);
        for (int i = 0; i < 3; ++i) {
            r0[(axis_ + i) % 3] = r_ * dTheta[i];
            r1[(axis_ + i) % 3] = r_ * dPhi[i];
        }
        j.setRow(0, r0);
        j.setRow(1, r1);
        return j;
    }
    std::string label() const override { return "sphere-chart"; }

private:
    RealVec c_;
    double r_;
    int axis_;
};

}  // namespace

MapPtr makeConstantMap(int m, const RealVec& value, double p) {
    return std::make_shared<ConstantMap>(m, value, p);
}

MapPtr makeLinearMap(const SmallMat& matrix, double p) {
    return std::make_shared<LinearMap>(matrix, p);
}

MapPtr makeRadialMap(int m, double p) {
    if (m < 3) throw DomainError("radial projection catalog requires m >= 3");
    return std::make_shared<RadialMap>(m, p);
}

double gradientWeight(double gradNormSq, double p) {
    if (gradNormSq < 1e-28) return 0.0;
    if (p == 2.0) return 1.0;
    return std::pow(gradNormSq, 0.5 * (p - 2.0));
}

double energyRatio(const MapSolution& map, const QBallFamily& family, double s,
                   const QuadratureSpec& spec) {
    if (s <= 0.0) throw DomainError("scale must be positive");
    const double p = map.p();
    const int m = map.domainDim();
    if (!(p > 1.0 && p < m)) throw DomainError("energy exponent must satisfy 1 < p < m");
    return std::pow(s, 0.5 * (p - m)) * rawEnergy(map, family, s, spec);
}

double energyRatioViaSublevel(const MapSolution& map, const QBallFamily& family, double s,
                              const QuadratureSpec& spec) {
    if (s <= 0.0) throw DomainError("scale must be positive");
    const double p = map.p();
    const int m = map.domainDim();
    if (!(p > 1.0 && p < m)) throw DomainError("energy exponent must satisfy 1 < p < m");
    return std::pow(s, 0.5 * (p - m)) * rawEnergyViaSublevel(map, family, s, spec);
}

double sphereIntegral(const RealVec& centre, double radius,
                      const std::function<double(const RealVec&)>& fn,
                      const QuadratureSpec& spec, double relTol) {
    (void)spec;
    (void)relTol;
    // Partition junctions in |z - cz|/R; chart z is integrated with theta
    // panels aligned to them, so its rule never sees the blend kinks.
    const double a = 0.30, b = 0.78;

    double total = 0.0;
    {  // chart about the z-axis: equatorial band, weight psi(|cos theta|)
        const GaussRule& tRule = gaussRule(16);
        const int nPhi = 48;
        const double breaks[4] = {std::acos(b), std::acos(a), std::acos(-a), std::acos(-b)};
        const double panels[3][2] = {
            {breaks[0], breaks[1]}, {breaks[1], breaks[2]}, {breaks[2], breaks[3]}};
        for (const auto& panel : panels) {
            for (std::size_t it = 0; it < tRule.nodes.size(); ++it) {
                const double th =
                    panel[0] + 0.5 * (panel[1] - panel[0]) * (1.0 + tRule.nodes[it]);
                const double w = smoothStep(std::abs(std::cos(th)));
                if (w == 0.0) continue;
                const double wt = 0.5 * (panel[1] - panel[0]) * tRule.weights[it] *
                                  std::sin(th) * w;
                double ring = 0.0;
                for (int ip = 0; ip < nPhi; ++ip) {
                    const double ph = 2.0 * M_PI * ip / nPhi;
                    RealVec x = centre + radius * RealVec{std::sin(th) * std::cos(ph),
                                                          std::sin(th) * std::sin(ph),
                                                          std::cos(th)};
                    ring += fn(x);
                }
                total += wt * ring * (2.0 * M_PI / nPhi) * radius * radius;
            }
        }
    }
    {  // chart about the x-axis: carries the complementary polar-cap weight
        const GaussRule& tRule = gaussRule(32);
        const int nPhi = 96;
        for (std::size_t it = 0; it < tRule.nodes.size(); ++it) {
            const double th = 0.5 * M_PI * (1.0 + tRule.nodes[it]);
            const double wt = 0.5 * M_PI * tRule.weights[it] * std::sin(th);
            double ring = 0.0;
            for (int ip = 0; ip < nPhi; ++ip) {
                const double ph = 2.0 * M_PI * ip / nPhi;
                RealVec x = centre + radius * RealVec{std::cos(th),
                                                      std::sin(th) * std::cos(ph),
                                                      std::sin(th) * std::sin(ph)};
                const double w = 1.0 - smoothStep(std::abs(x[2] - centre[2]) / radius);
                if (w != 0.0) ring += w * fn(x);
            }
            total += wt * ring * (2.0 * M_PI / nPhi) * radius * radius;
        }
    }
    return total;
}

PharmBoundary pharmBoundaryTerms(const MapSolution& map, const QBallFamily& family, double s,
                                 const QuadratureSpec& spec) {
    if (s <= 0.0) throw DomainError("scale must be positive");
    if (map.domainDim() != 3)
        throw DomainError("sphere boundary terms implemented for m = 3");
    const double p = map.p();
    const double q = family.q();
    const int m = map.domainDim();
    const double r = family.radius(s);
    const SphereTerms terms = sphereTermIntegrals(map, family, s, spec);
    PharmBoundary out;
    out.a = q * std::pow(s, 0.5 * (p - m + 2.0)) / (2.0 * r) * terms.a;
    out.b = std::pow(s, 0.5 * (p - m - 2.0)) / (2.0 * r) * terms.b;
    out.aIntegrandMin = terms.aMin;
    return out;
}

double pharmBulkIncrement(const MapSolution& map, const QBallFamily& family, double s,
                          double t, const QuadratureSpec& spec) {
    if (!(0.0 < s && s < t)) throw DomainError("need 0 < s < t");
    return rawBulkAt(map, family, t, spec) - rawBulkAt(map, family, s, spec);
}

CorollarySeries corollaryQuantities(const MapSolution& map, const QBallFamily& family,
                                    const std::vector<double>& sGrid,
                                    const QuadratureSpec& spec) {
    CorollarySeries series;
    series.grid = sGrid;
    const double p = map.p();
    const double q = family.q();
    const int m = map.domainDim();
    const double interpExp = (q - 1.0) / (p - 1.0) * 0.5 * (p - m);
    const double sharpExp = 0.5 * (p - m);
    for (double s : sGrid) {
        const double raw = rawEnergy(map, family, s, spec);
        series.interpolated.push_back(std::pow(s, interpExp) * raw);
        series.sharp.push_back(std::pow(s, sharpExp) * raw);
    }
    auto nondecreasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[i - 1] - 1e-8 * (1.0 + std::abs(v[i - 1]))) return false;
        return true;
    };
    series.interpolatedMonotone = nondecreasing(series.interpolated);
    series.sharpMonotone = nondecreasing(series.sharp);
    const auto [mn, mx] = std::minmax_element(series.sharp.begin(), series.sharp.end());
    series.sharpRange = *mx - *mn;
    return series;
}

PolyVectorField PolyVectorField::identity(int m) {
    PolyVectorField f;
    f.m_ = m;
    for (int i = 0; i < m; ++i) {
        std::array<int, 3> e{0, 0, 0};
        e[i] = 1;
        f.expos_.push_back(e);
    }
    f.coef_.assign(m, std::vector<double>(f.expos_.size(), 0.0));
    for (int i = 0; i < m; ++i) f.coef_[i][i] = 1.0;
    return f;
}

PolyVectorField PolyVectorField::random(int m, int degree, Rng& rng) {
    PolyVectorField f;
    f.m_ = m;
    for (int d0 = 0; d0 <= degree; ++d0)
        for (int d1 = 0; d1 <= degree - d0; ++d1)
            for (int d2 = 0; d2 <= degree - d0 - d1; ++d2) {
                if (m < 3 && d2 > 0) continue;
                if (m < 2 && d1 > 0) continue;
                f.expos_.push_back({d0, d1, d2});
            }
    f.coef_.assign(m, std::vector<double>(f.expos_.size(), 0.0));
    for (int c = 0; c < m; ++c)
        for (auto& v : f.coef_[c]) v = rng.uniform(-1.0, 1.0);
    return f;
}

RealVec PolyVectorField::eval(const RealVec& x) const {
    RealVec out(m_);
    for (std::size_t t = 0; t < expos_.size(); ++t) {
        double mono = 1.0;
        for (int a = 0; a < m_; ++a)
            for (int e = 0; e < expos_[t][a]; ++e) mono *= x[a];
        for (int c = 0; c < m_; ++c) out[c] += coef_[c][t] * mono;
    }
    return out;
}

SmallMat PolyVectorField::jacobian(const RealVec& x) const {
    SmallMat j(m_, m_);
    for (std::size_t t = 0; t < expos_.size(); ++t) {
        for (int d = 0; d < m_; ++d) {
            if (expos_[t][d] == 0) continue;
            double mono = static_cast<double>(expos_[t][d]);
            for (int a = 0; a < m_; ++a) {
                const int e = expos_[t][a] - (a == d ? 1 : 0);
                for (int r = 0; r < e; ++r) mono *= x[a];
            }
            for (int c = 0; c < m_; ++c) j(c, d) += coef_[c][t] * mono;
        }
    }
    return j;
}

double stationarityCheck(const MapSolution& map, const Box& box, const PolyVectorField& field,
                         const QuadratureSpec& spec) {
    const int m = map.domainDim();
    if (field.dim() != m) throw DomainError("vector field dimension mismatch");
    const double p = map.p();

    const PatchIntegrand bulkFn = [&](const PatchPoint& pt) {
        const SmallMat g = map.gradient(pt.x);
        const double g2 = g.frobeniusSq();
        const double w = gradientWeight(g2, p);
        if (w == 0.0) return 0.0;
        const SmallMat jx = field.jacobian(pt.x);
        double divX = 0.0;
        for (int i = 0; i < m; ++i) divX += jx(i, i);
        // <grad X, grad u ⊗ grad u> = X_{i,j} T_{ij}, T = grad u grad u^T.
        double contraction = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) contraction += jx(i, j) * dot(g.row(i), g.row(j));
        return w * (g2 * divX - p * contraction);
    };
    const PatchPtr domain = makeBoxPatch(box, "stationarity-domain");
    const double bulk = integratePatch(*domain, bulkFn, spec, 1e-10).value;

    double boundary = 0.0;
    for (int axis = 0; axis < m; ++axis) {
        for (int side = 0; side < 2; ++side) {
            RealVec base = RealVec::zero(m);
            base[axis] = side ? box.hi[axis] : box.lo[axis];
            std::vector<RealVec> basis;
            RealVec faceLo(m - 1 > 0 ? m - 1 : 1), faceHi(m - 1 > 0 ? m - 1 : 1);
            int j = 0;
            for (int a = 0; a < m; ++a) {
                if (a == axis) continue;
                basis.push_back(RealVec::unit(m, a));
                faceLo[j] = box.lo[a];
                faceHi[j] = box.hi[a];
                ++j;
            }
            const PatchPtr face =
                makeAffinePatch(base, basis, Box{faceLo, faceHi}, "stationarity-face");
            const double sign = side ? 1.0 : -1.0;
            const PatchIntegrand faceFn = [&, axis, sign](const PatchPoint& pt) {
                const SmallMat g = map.gradient(pt.x);
                const double g2 = g.frobeniusSq();
                const double w = gradientWeight(g2, p);
                if (w == 0.0) return 0.0;
                const RealVec xv = field.eval(pt.x);
                const RealVec xDotU = g.applyTransposed(xv);
                const RealVec nuDotU = g.row(axis);
                return w * (g2 * sign * xv[axis] - p * sign * dot(xDotU, nuDotU));
            };
            boundary += integratePatch(*face, faceFn, spec, 1e-10).value;
        }
    }
    return std::abs(bulk - boundary) / (1.0 + std::abs(bulk));
}

PharmReport pharmReport(const MapSolution& map, const QBallFamily& family,
                        const std::vector<double>& grid, const QuadratureSpec& spec,
                        const PharmTolerances& tol) {
    PharmReport rep;
    rep.grid = grid;
    const int npts = static_cast<int>(grid.size());
    const double p = map.p();
    const double q = family.q();
    const int m = map.domainDim();
    const double interpExp = (q - 1.0) / (p - 1.0) * 0.5 * (p - m);

    std::vector<double> bulkAt(npts, 0.0);
    for (int i = 0; i < npts; ++i) {
        const double s = grid[i];
        const double raw = rawEnergy(map, family, s, spec);
        rep.ratio.push_back(std::pow(s, 0.5 * (p - m)) * raw);
        rep.interpolated.push_back(std::pow(s, interpExp) * raw);
        const PharmBoundary pb = pharmBoundaryTerms(map, family, s, spec);
        rep.boundaryA.push_back(pb.a);
        rep.boundaryB.push_back(pb.b);
        rep.fdDerivative.push_back(fdDerivative(
            [&](double sv) { return energyRatio(map, family, sv, spec); }, s));
        bulkAt[i] = rawBulkAt(map, family, s, spec);
    }

    rep.identityDiff = true;
    rep.identityInt = true;
    for (int i = 0; i < npts; ++i) {
        const double rhs = rep.boundaryA[i] + rep.boundaryB[i];
        const double rd = std::abs(rep.fdDerivative[i] - rhs) / (1.0 + std::abs(rhs));
        rep.residualDiff.push_back(rd);
        if (rd > tol.diffRel) rep.identityDiff = false;
        double ri = 0.0;
        if (i > 0) {
            rep.bulkIncrement.push_back(bulkAt[i] - bulkAt[i - 1]);
            ri = std::abs(rep.ratio[i] - rep.ratio[i - 1] - rep.bulkIncrement.back()) /
                 (1.0 + std::abs(rep.ratio[i]));
            if (ri > tol.intRel) rep.identityInt = false;
        } else {
            rep.bulkIncrement.push_back(0.0);
        }
        rep.residualInt.push_back(ri);
        rep.worstResidual = std::max({rep.worstResidual, rd, ri});
    }

    rep.interpolatedMonotone = true;
    for (int i = 1; i < npts; ++i)
        if (rep.interpolated[i] <
            rep.interpolated[i - 1] - tol.monoSlack * (1.0 + std::abs(rep.interpolated[i - 1])))
            rep.interpolatedMonotone = false;

    const auto [mn, mx] = std::minmax_element(rep.ratio.begin(), rep.ratio.end());
    const double range = *mx - *mn;
    const bool constantSeries = range < 1e-8 * (1.0 + std::abs(*mx));
    const bool isConstantMap = map.gradient(RealVec::unit(m, 0)).frobeniusSq() < 1e-28;
    if (family.y().norm() > 0.0 && std::abs(q - p) < 1e-12)
        rep.rigidityConsistent = constantSeries == isConstantMap;
    else
        rep.rigidityConsistent = true;
    rep.verdict = rep.identityDiff && rep.identityInt && rep.interpolatedMonotone &&
                  rep.rigidityConsistent;
    return rep;
}

}  // namespace mcm
