#include "mcmono/minimal_mono.hpp"

#include <algorithm>
#include <cmath>

namespace mcm {

namespace {

// Richardson-extrapolated central difference; the small step keeps the
// truncation error controlled near geometric contact scales where higher
// derivatives of the ratio blow up.
template <typename Fn>
double fdDerivative(const Fn& f, double s) {
    const double d = std::min(0.01 * s, 0.005);
    const double f1 = (f(s + d) - f(s - d)) / (2.0 * d);
    const double f2 = (f(s + 0.5 * d) - f(s - 0.5 * d)) / d;
    return (4.0 * f2 - f1) / 3.0;
}

IntegralResult sumOverCharts(const Surface& surface, const ScalarField& g, double level,
                             const PatchIntegrand& fn, const QuadratureSpec& spec) {
    IntegralResult total;
    for (const auto& chart : surface.charts) {
        IntegralResult r = integrateSublevel(*chart, g, level, fn, spec);
        total.value += r.value;
        total.errorBound += r.errorBound;
    }
    return total;
}

PatchIntegrand bulkIntegrand(const MinimalBallFamily& family, int k) {
    const RealVec y = family.y();
    return [family, y, k](const PatchPoint& pt) {
        const double f = family.levelFunctionOrInf(pt.x);
        const RealVec d = pt.x - y;
        const double d2 = d.normSq();
        if (f <= 0.0 || d2 == 0.0) return 0.0;  // removable at the vertex
        const RealVec dPerp = normalPart(pt.jac, d);
        const RealVec yTan = tangentialPart(pt.jac, y);
        return std::pow(f, -0.5 * k) * (dPerp.normSq() + f * f * yTan.normSq()) / d2;
    };
}

}  // namespace

std::vector<double> geometricGrid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("bad geometric grid");
    std::vector<double> g(count);
    const double r = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) g[i] = lo * std::exp(r * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

double unitBallVolume(int k) {
    switch (k) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
        default: throw DomainError("unit ball volume only provided for k <= 3");
    }
}

double areaRatio(const Surface& surface, const MinimalBallFamily& family, double s,
                 const QuadratureSpec& spec) {
    if (s <= 0.0) throw DomainError("scale must be positive");
    const ScalarField f = family.asField();
    const PatchIntegrand one = [](const PatchPoint&) { return 1.0; };
    return std::pow(s, -0.5 * surface.k) * sumOverCharts(surface, f, s, one, spec).value;
}

double boundaryFlux(const Surface& surface, const MinimalBallFamily& family, double s,
                    const QuadratureSpec& spec) {
    if (surface.k != 2)
        throw DomainError("boundary flux is computed on 2-dimensional charts only");
    if (s <= 0.0) throw DomainError("scale must be positive");
    const ScalarField f = family.asField();
    const RealVec y = family.y();
    const PatchIntegrand fn = [y, s](const PatchPoint& pt) {
        const RealVec d = pt.x - y;
        const RealVec dPerp = normalPart(pt.jac, d);
        const RealVec yTan = tangentialPart(pt.jac, y);
        const RealVec wTan = tangentialPart(pt.jac, d + s * y);
        const double denom = wTan.norm();
        if (denom < 1e-12)
            throw RegularValueError("tangential direction degenerates on the level curve");
        return (dPerp.normSq() + s * s * yTan.normSq()) / denom;
    };
    double total = 0.0;
    for (const auto& chart : surface.charts)
        total += integrateLevelCurve(*chart, f, s, fn, spec);
    return 0.5 * std::pow(s, -0.5 * (surface.k + 2)) * total;
}

double bulkIncrement(const Surface& surface, const MinimalBallFamily& family, double s,
                     double t, const QuadratureSpec& spec) {
    if (!(0.0 < s && s < t)) throw DomainError("need 0 < s < t");
    if (s < 0.999e-3)
        throw DomainError("bulk increment requires s >= 1e-3 (weight too singular)");
    const ScalarField f = family.asField();
    const PatchIntegrand fn = bulkIntegrand(family, surface.k);
    return sumOverCharts(surface, f, t, fn, spec).value -
           sumOverCharts(surface, f, s, fn, spec).value;
}

double almostMonoFactor(const MinimalBallFamily& family, int k, double cH, double s) {
    if (s < 0.0) throw DomainError("scale must be nonnegative");
    const double yn = family.y().norm();
    const double mu = 1.5 * s * yn + std::sqrt(s * (1.0 - yn * yn));
    return std::exp(k * cH * mu);
}

DensityEstimate densityLimit(const Surface& surface, const MinimalBallFamily& family,
                             double sMin, int samples, const QuadratureSpec& spec) {
    if (samples < 2 || samples > 8) throw DomainError("density extrapolation needs 2..8 samples");
    const double yn2 = family.y().normSq();
    const double scale = unitBallVolume(surface.k) * std::pow(1.0 - yn2, 0.5 * surface.k);

    DensityEstimate est;
    // Descending h = sqrt(s): largest scale first, each step halves h.
    for (int i = samples - 1; i >= 0; --i) {
        const double s = sMin * std::pow(4.0, i);
        est.raw.push_back(areaRatio(surface, family, s, spec) / scale);
    }
    // Richardson table eliminating h, h^2, ... successively.
    std::vector<double> t = est.raw;
    double prevDiag = t.back();
    for (std::size_t l = 1; l < t.size(); ++l) {
        const double w = std::pow(2.0, static_cast<double>(l));
        for (std::size_t j = t.size() - 1; j >= l; --j)
            t[j] = (w * t[j] - t[j - 1]) / (w - 1.0);
        if (l + 1 == t.size() &&
            std::abs(t.back() - prevDiag) > 2e-3 * (1.0 + std::abs(t.back())))
            throw ExtrapolationError("density extrapolation did not settle", est.raw);
        prevDiag = t.back();
    }
    est.density = t.back();
    return est;
}

BHFieldSample bhFieldIdentity(const ParametricPatch& patch, const MinimalBallFamily& family,
                              const RealVec& u) {
    const int k = patch.paramDim();
    if (k < 2) throw DomainError("comparison field needs k >= 2");
    const RealVec y = family.y();

    auto bigF = [k](double t) {
        if (k == 2) return -0.5 * std::log(t);
        return (std::pow(t, 0.5 * (2.0 - k)) - 1.0) / (k - 2.0);
    };
    auto fieldW = [&](const RealVec& x) {
        const double f = family.levelFunction(x);
        if (f <= 0.0) throw DomainError("comparison field undefined at the family vertex");
        return (-1.0 / k) * (std::pow(f, -0.5 * k) - 1.0) * (x - y) + bigF(f) * y;
    };

    BHFieldSample sample;
    sample.x = patch.embed(u);
    sample.w = fieldW(sample.x);
    sample.w0 = (1.0 / k) * (sample.x - y) - sample.w;

    const double f = family.levelFunction(sample.x);
    const SmallMat jac = patch.jacobian(u);
    const RealVec d = sample.x - y;
    const RealVec dPerp = normalPart(jac, d);
    const RealVec yTan = tangentialPart(jac, y);
    sample.divClosedForm = (std::pow(f, -0.5 * k) * dPerp.normSq() +
                            std::pow(f, 0.5 * (4.0 - k)) * yTan.normSq()) /
                           d.normSq();
    sample.divNumeric = 1.0 - surfaceDivergenceFD(patch, u, fieldW);
    return sample;
}

BrendleHungReport brendleHungCheck(const Surface& surface, const MinimalBallFamily& family,
                                   const std::vector<double>& sGrid,
                                   const QuadratureSpec& spec) {
    BrendleHungReport rep;
    rep.grid = sGrid;
    rep.ratio.reserve(sGrid.size());
    for (double s : sGrid) rep.ratio.push_back(areaRatio(surface, family, s, spec));

    rep.monotone = true;
    for (std::size_t i = 1; i < rep.ratio.size(); ++i)
        if (rep.ratio[i] < rep.ratio[i - 1] - 1e-8 * (1.0 + std::abs(rep.ratio[i - 1])))
            rep.monotone = false;

    const DensityEstimate density = densityLimit(surface, family, 2.5e-4, 4, spec);
    rep.density = density.density;
    const double yn2 = family.y().normSq();
    rep.bound = unitBallVolume(surface.k) * std::pow(1.0 - yn2, 0.5 * surface.k) * rep.density;
    rep.margin = rep.ratio.back() - rep.bound;
    rep.pass = rep.monotone && rep.margin >= -1e-6 * (1.0 + rep.bound);
    return rep;
}

MinimalMonoReport minimalMonoReport(const Surface& surface, const MinimalBallFamily& family,
                                    const std::vector<double>& grid,
                                    const QuadratureSpec& spec, const MonoTolerances& tol,
                                    double cH, bool negateFluxFault) {
    MinimalMonoReport rep;
    rep.grid = grid;
    const int npts = static_cast<int>(grid.size());
    const bool corrected = cH > 0.0;
    const bool identities = !corrected && surface.minimal;
    const bool fluxable = identities && surface.k == 2;

    const ScalarField f = family.asField();
    const PatchIntegrand one = [](const PatchPoint&) { return 1.0; };
    const PatchIntegrand bulk = bulkIntegrand(family, surface.k);

    std::vector<double> bulkAt(npts, 0.0);
    for (int i = 0; i < npts; ++i) {
        const double s = grid[i];
        IntegralResult area = sumOverCharts(surface, f, s, one, spec);
        rep.quadBound += area.errorBound;
        rep.ratio.push_back(std::pow(s, -0.5 * surface.k) * area.value);
        rep.corrected.push_back(rep.ratio.back() *
                                (corrected ? almostMonoFactor(family, surface.k, cH, s) : 1.0));
        if (identities) {
            rep.fdDerivative.push_back(fdDerivative(
                [&](double sv) { return areaRatio(surface, family, sv, spec); }, s));
            bulkAt[i] = sumOverCharts(surface, f, s, bulk, spec).value;
        }
        if (fluxable) {
            double flux = boundaryFlux(surface, family, s, spec);
            if (negateFluxFault) flux = -flux;
            rep.boundaryFlux.push_back(flux);
        }
    }

    rep.monotone = true;
    const std::vector<double>& monoSeries = corrected ? rep.corrected : rep.ratio;
    for (int i = 1; i < npts; ++i)
        if (monoSeries[i] < monoSeries[i - 1] - tol.monoSlack * (1.0 + std::abs(monoSeries[i - 1])))
            rep.monotone = false;

    rep.identityDiff = true;
    rep.identityInt = true;
    if (identities) {
        for (int i = 0; i < npts; ++i) {
            double rd = 0.0;
            if (fluxable) {
                rd = std::abs(rep.fdDerivative[i] - rep.boundaryFlux[i]) /
                     (1.0 + std::abs(rep.boundaryFlux[i]));
                if (rd > tol.diffRel) rep.identityDiff = false;
            }
            rep.residualDiff.push_back(rd);
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
    }
    rep.verdict = rep.monotone && rep.identityDiff && rep.identityInt;
    return rep;
}

}  // namespace mcm
