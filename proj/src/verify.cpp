#include "mcmono/verify.hpp"

#include <algorithm>
#include <cmath>

#include "mcmono/ball_family.hpp"
#include "mcmono/catalog.hpp"
#include "mcmono/minimal_mono.hpp"
#include "mcmono/rng.hpp"

namespace mcm {

namespace {

CheckResult ballNesting(Rng& rng) {
    CheckResult r{"ball-nesting", true, 0.0, 1e-12, 100};
    for (int i = 0; i < r.samples; ++i) {
        const bool qVariant = rng.uniform() < 0.5;
        const double s = rng.uniform(1e-3, 1.0);
        const double t = s + rng.uniform(1e-3, 2.0);
        double gap;
        if (qVariant) {
            const double q = rng.uniform(1.0, 3.0);
            const RealVec y = rng.uniform(0.0, 0.95 / std::sqrt(q)) * rng.unitVec(3);
            QBallFamily fam(y, q);
            gap = (fam.centre(s) - fam.centre(t)).norm() + fam.radius(s) - fam.radius(t);
        } else {
            const RealVec y = rng.uniform(0.0, 0.95) * rng.unitVec(3);
            MinimalBallFamily fam(y);
            gap = (fam.centre(s) - fam.centre(t)).norm() + fam.radius(s) - fam.radius(t);
        }
        r.worstResidual = std::max(r.worstResidual, gap);
        if (gap > r.tolerance) r.pass = false;
    }
    return r;
}

CheckResult levelBallConsistency(Rng& rng) {
    CheckResult r{"level-ball-consistency", true, 0.0, 1e-10, 100};
    for (int i = 0; i < r.samples; ++i) {
        const bool qVariant = rng.uniform() < 0.5;
        const double s = rng.uniform(1e-3, 2.0);
        const RealVec e = rng.unitVec(3);
        double residual;
        if (qVariant) {
            const double q = rng.uniform(1.0, 3.0);
            const RealVec y = rng.uniform(0.0, 0.9 / std::sqrt(q)) * rng.unitVec(3);
            QBallFamily fam(y, q);
            const RealVec x = fam.centre(s) + fam.radius(s) * e;
            residual = std::abs(fam.levelFunction(x) - s);
        } else {
            const RealVec y = rng.uniform(0.0, 0.9) * rng.unitVec(3);
            MinimalBallFamily fam(y);
            const double sCapped = std::min(s, 1.5);
            const RealVec x = fam.centre(sCapped) + fam.radius(sCapped) * e;
            residual = std::abs(fam.levelFunction(x) - sCapped);
        }
        r.worstResidual = std::max(r.worstResidual, residual);
        if (residual > r.tolerance) r.pass = false;
    }
    return r;
}

CheckResult definingIdentity(Rng& rng) {
    CheckResult r{"defining-identity", true, 0.0, 1e-12, 200};
    for (int i = 0; i < r.samples; ++i) {
        const RealVec x = rng.vec(3, -1.5, 1.5);
        const bool qVariant = rng.uniform() < 0.5;
        double residual = 0.0;
        if (qVariant) {
            const double q = rng.uniform(1.0, 3.0);
            const RealVec y = rng.uniform(0.0, 0.9 / std::sqrt(q)) * rng.unitVec(3);
            QBallFamily fam(y, q);
            residual = fam.definingResidual(x);
            if (!std::isfinite(residual)) continue;  // outside the q = 1 foliation
        } else {
            const RealVec y = rng.uniform(0.0, 0.9) * rng.unitVec(3);
            MinimalBallFamily fam(y);
            residual = fam.definingResidual(x);
            if (!std::isfinite(residual)) continue;
        }
        const double scaled = residual / (1.0 + x.normSq());
        r.worstResidual = std::max(r.worstResidual, scaled);
        if (scaled > r.tolerance) r.pass = false;
    }
    return r;
}

CheckResult rigidMotionRelation(Rng& rng) {
    CheckResult r{"q1-rigid-motion", true, 0.0, 1e-12, 100};
    for (int i = 0; i < r.samples; ++i) {
        const RealVec y = rng.uniform(0.05, 0.9) * rng.unitVec(3);
        MinimalBallFamily minimal(y);
        QBallFamily q1(y, 1.0);
        const RealVec x = rng.vec(3, -1.0, 1.0);
        const double fq = q1.levelFunctionOrInf(x);
        const double fm = minimal.levelFunctionOrInf(y - x);
        if (!std::isfinite(fq) || !std::isfinite(fm)) continue;
        const double residual = std::abs(fq - fm) / (1.0 + std::abs(fm));
        r.worstResidual = std::max(r.worstResidual, residual);
        if (residual > r.tolerance) r.pass = false;
    }
    return r;
}

CheckResult branchContinuity(Rng& rng) {
    CheckResult r{"q-branch-continuity", true, 0.0, 1e-8, 60};
    // The rationalized root must agree with the analytic q -> 1 limit form
    // in the degenerate regime and with the naive quadratic formula away
    // from it.
    for (int i = 0; i < r.samples; ++i) {
        const RealVec x = rng.vec(3, -1.0, 1.0);
        const double yn = rng.uniform(0.1, 0.5);
        const RealVec y = yn * rng.unitVec(3);
        for (double dq : {1e-13, 1e-10, 1e-3, 0.5, 1.0}) {
            const double q = 1.0 + dq;
            QBallFamily fam(y, q);
            const double f = fam.levelFunctionOrInf(x);
            if (!std::isfinite(f)) continue;
            const double a = (q - 1.0) * y.normSq();
            const double b = 1.0 - q * y.normSq() + 2.0 * dot(x, y);
            double reference;
            if (a < 1e-9 && b > 0.2) {
                reference = x.normSq() / b;  // analytic degenerate limit
            } else if (a > 1e-6 && b > 0.2) {
                reference = (-b + std::sqrt(b * b + 4.0 * a * x.normSq())) / (2.0 * a);
            } else {
                continue;
            }
            const double residual = std::abs(f - reference) / (1.0 + std::abs(f));
            r.worstResidual = std::max(r.worstResidual, residual);
            if (residual > r.tolerance) r.pass = false;
        }
    }
    return r;
}

CheckResult projectionIdempotence(Rng& rng) {
    CheckResult r{"projection-idempotence", true, 0.0, 1e-12, 100};
    const Surface catenoid = catalogCatenoid(0.5);
    const Surface helicoid = catalogHelicoid(0.5);
    const std::vector<const Surface*> surfaces{&catenoid, &helicoid};
    for (int i = 0; i < r.samples; ++i) {
        const Surface& surf = *surfaces[i % surfaces.size()];
        const ParametricPatch& patch = *surf.charts[0];
        const Box box = patch.domain();
        RealVec u(2);
        for (int a = 0; a < 2; ++a) u[a] = rng.uniform(box.lo[a], box.hi[a]);
        const RealVec v = rng.vec(3, -2.0, 2.0);
        const RealVec t1 = tangentialPart(patch, u, v);
        const RealVec t2 = tangentialPart(patch, u, t1);
        const RealVec sum = t1 + normalPart(patch, u, v);
        const double residual =
            std::max((t2 - t1).norm(), (sum - v).norm()) / (1.0 + v.norm());
        r.worstResidual = std::max(r.worstResidual, residual);
        if (residual > r.tolerance) r.pass = false;
    }
    return r;
}

CheckResult coareaConsistency(Rng& rng) {
    CheckResult r{"coarea-consistency", true, 0.0, 1e-3, 0};
    QuadratureSpec spec;
    const Surface disk = catalogFlatDisk(RealVec{0.3, 0.0, 0.0}, true, 0.0);
    const Surface catenoid = catalogCatenoid(0.6);
    const std::vector<const Surface*> surfaces{&disk, &catenoid};
    const ScalarField g{[](const RealVec& x) { return x.normSq(); },
                        [](const RealVec& x) { return 2.0 * x; }};
    const PatchIntegrand one = [](const PatchPoint&) { return 1.0; };
    for (const Surface* surf : surfaces) {
        for (int i = 0; i < 5; ++i) {
            const double c = surf == &catenoid ? rng.uniform(0.45, 1.2) : rng.uniform(0.2, 1.0);
            const ParametricPatch& patch = *surf->charts[0];
            const PatchIntegrand invGrad = [&](const PatchPoint& pt) {
                const RealVec gt = tangentialPart(pt.jac, 2.0 * pt.x);
                return 1.0 / gt.norm();
            };
            const double curve = integrateLevelCurve(patch, g, c, invGrad, spec);
            const double d = 1e-4 * (1.0 + c);
            const double area1 = integrateSublevel(patch, g, c + d, one, spec).value;
            const double area0 = integrateSublevel(patch, g, c - d, one, spec).value;
            const double fd = (area1 - area0) / (2.0 * d);
            const double residual = std::abs(fd - curve) / (1.0 + std::abs(curve));
            r.worstResidual = std::max(r.worstResidual, residual);
            ++r.samples;
            if (residual > r.tolerance) r.pass = false;
        }
    }
    return r;
}

}  // namespace

std::vector<CheckResult> runIdentitySuite(std::uint64_t seed) {
    std::vector<CheckResult> results;
    {
        Rng rng(seed);
        results.push_back(ballNesting(rng));
    }
    {
        Rng rng(seed + 1);
        results.push_back(levelBallConsistency(rng));
    }
    {
        Rng rng(seed + 2);
        results.push_back(definingIdentity(rng));
    }
    {
        Rng rng(seed + 3);
        results.push_back(rigidMotionRelation(rng));
    }
    {
        Rng rng(seed + 4);
        results.push_back(branchContinuity(rng));
    }
    {
        Rng rng(seed + 5);
        results.push_back(projectionIdempotence(rng));
    }
    {
        Rng rng(seed + 6);
        results.push_back(coareaConsistency(rng));
    }
    return results;
}

}  // namespace mcm
