#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mcmono/ball_family.hpp"
#include "mcmono/errors.hpp"
#include "mcmono/rng.hpp"

using namespace mcm;

TEST_CASE("centre and radius") {
    SUBCASE("centred family has radius sqrt(s)") {
        MinimalBallFamily fam(RealVec::zero(3));
        auto [c, r] = fam.centreAndRadius(0.36);
        CHECK(c.norm() == 0.0);
        CHECK(r == doctest::Approx(0.6).epsilon(1e-15));
    }
    SUBCASE("every admissible centre reaches the unit ball at s = 1") {
        Rng rng(3);
        for (int i = 0; i < 20; ++i) {
            MinimalBallFamily fam(rng.uniform(0.0, 0.95) * rng.unitVec(3));
            auto [c, r] = fam.centreAndRadius(1.0);
            CHECK(c.norm() < 1e-15);
            CHECK(r == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("q-family formula") {
        QBallFamily fam(RealVec{0.5, 0, 0}, 2.0);
        auto [c, r] = fam.centreAndRadius(1.0);
        CHECK(c[0] == doctest::Approx(0.5));
        CHECK(r == doctest::Approx(1.0).epsilon(1e-14));  // sqrt(0.5 + 0.5)
    }
    SUBCASE("nonpositive scale is rejected") {
        MinimalBallFamily fam(RealVec{0.3, 0, 0});
        CHECK_THROWS_AS(fam.centreAndRadius(0.0), DomainError);
        CHECK_THROWS_AS(fam.centreAndRadius(-1.0), DomainError);
    }
}

TEST_CASE("level function values") {
    MinimalBallFamily fam(RealVec{0.3, 0.2, -0.1});
    CHECK(fam.levelFunction(fam.y()) == doctest::Approx(0.0));
    // the whole unit sphere is the s = 1 level set
    Rng rng(7);
    for (int i = 0; i < 30; ++i)
        CHECK(fam.levelFunction(rng.unitVec(3)) == doctest::Approx(1.0).epsilon(1e-12));

    QBallFamily q1(RealVec{0.3, 0, 0}, 1.0);
    QBallFamily q2(RealVec{0.3, 0, 0}, 2.0);
    CHECK(q1.levelFunction(RealVec::zero(3)) == 0.0);
    CHECK(q2.levelFunction(RealVec::zero(3)) == 0.0);
}

TEST_CASE("the two algebraic forms of the level function agree") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        MinimalBallFamily fam(rng.uniform(0.0, 0.9) * rng.unitVec(3));
        const RealVec x = rng.vec(3, -1.2, 1.2);
        double f1, f2;
        try {
            f1 = fam.levelFunction(x);
            f2 = fam.levelFunctionAlt(x);
        } catch (const OutsideFoliationError&) {
            continue;
        }
        CHECK(std::abs(f1 - f2) < 1e-11 * (1.0 + f1));
    }
}

TEST_CASE("outside-foliation points are rejected") {
    MinimalBallFamily fam(RealVec{0.6, 0, 0});
    // denominator 1 - 2<x,y> + |y|^2 <= 0 for x far along y
    CHECK_THROWS_AS(fam.levelFunction(RealVec{2.0, 0, 0}), OutsideFoliationError);
    CHECK(std::isinf(fam.levelFunctionOrInf(RealVec{2.0, 0, 0})));

    QBallFamily q1(RealVec{0.6, 0, 0}, 1.0);
    CHECK_THROWS_AS(q1.levelFunction(RealVec{-2.0, 0, 0}), OutsideFoliationError);
    // for q > 1 the family fills all of space
    QBallFamily q2(RealVec{0.6, 0, 0}, 1.5);
    CHECK(std::isfinite(q2.levelFunction(RealVec{-2.0, 0, 0})));
}

TEST_CASE("closed-form gradients against finite differences") {
    Rng rng(23);
    auto fdGrad = [](auto&& fn, const RealVec& x) {
        RealVec g(x.dim());
        for (int a = 0; a < x.dim(); ++a) {
            const double h = 1e-6 * (1.0 + std::abs(x[a]));
            RealVec xp = x, xm = x;
            xp[a] += h;
            xm[a] -= h;
            g[a] = (fn(xp) - fn(xm)) / (2.0 * h);
        }
        return g;
    };
    SUBCASE("centred family reduces to the gradient of |x|^2") {
        MinimalBallFamily fam(RealVec::zero(3));
        const RealVec x{0.3, -0.4, 0.2};
        CHECK((fam.levelGradient(x) - 2.0 * x).norm() < 1e-13);
    }
    SUBCASE("minimal family") {
        MinimalBallFamily fam(RealVec{0.3, 0, 0});
        const RealVec x{0.3, 0.4, 0.0};
        CHECK(fam.levelFunction(x) == doctest::Approx(0.16 / 0.91).epsilon(1e-14));
        const RealVec g = fam.levelGradient(x);
        const RealVec gf = fdGrad([&](const RealVec& p) { return fam.levelFunction(p); }, x);
        CHECK((g - gf).norm() < 1e-8 * (1.0 + g.norm()));
    }
    SUBCASE("q-family at random points") {
        for (int i = 0; i < 40; ++i) {
            const double q = rng.uniform(1.0, 2.5);
            QBallFamily fam(rng.uniform(0.0, 0.9 / std::sqrt(q)) * rng.unitVec(3), q);
            const RealVec x = rng.vec(3, -1.0, 1.0);
            if (x.norm() < 0.05) continue;
            double f;
            try {
                f = fam.levelFunction(x);
            } catch (const OutsideFoliationError&) {
                continue;
            }
            if (f <= 1e-6) continue;
            const RealVec g = fam.levelGradient(x);
            const RealVec gf =
                fdGrad([&](const RealVec& p) { return fam.levelFunction(p); }, x);
            CHECK((g - gf).norm() < 1e-7 * (1.0 + g.norm()));
            // closed-form norm identity
            CHECK(fam.levelGradientNorm(x) == doctest::Approx(g.norm()).epsilon(1e-11));
        }
    }
    SUBCASE("gradient undefined at the vertex") {
        MinimalBallFamily fam(RealVec{0.3, 0, 0});
        CHECK_THROWS_AS(fam.levelGradient(fam.y()), GradientUndefinedError);
    }
}

TEST_CASE("nesting, boundary consistency, defining identity") {
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const double s = rng.uniform(1e-3, 1.0);
        const double t = s + rng.uniform(1e-3, 2.0);
        const double q = rng.uniform(1.0, 3.0);
        MinimalBallFamily fam(rng.uniform(0.0, 0.95) * rng.unitVec(3));
        QBallFamily qfam(rng.uniform(0.0, 0.95 / std::sqrt(q)) * rng.unitVec(3), q);
        CHECK((fam.centre(s) - fam.centre(t)).norm() + fam.radius(s) <=
              fam.radius(t) + 1e-12);
        CHECK((qfam.centre(s) - qfam.centre(t)).norm() + qfam.radius(s) <=
              qfam.radius(t) + 1e-12);

        const RealVec e = rng.unitVec(3);
        const RealVec xb = fam.centre(s) + fam.radius(s) * e;
        CHECK(std::abs(fam.levelFunction(xb) - s) < 1e-10);
        const RealVec xq = qfam.centre(s) + qfam.radius(s) * e;
        CHECK(std::abs(qfam.levelFunction(xq) - s) < 1e-10);

        const RealVec x = rng.vec(3, -1.5, 1.5);
        const double res = fam.definingResidual(x);
        if (std::isfinite(res)) CHECK(res <= 1e-12 * (1.0 + x.normSq()));
        const double qres = qfam.definingResidual(x);
        if (std::isfinite(qres)) CHECK(qres <= 1e-12 * (1.0 + x.normSq()));
    }
}

TEST_CASE("q = 1 family is the minimal family after a point reflection") {
    Rng rng(41);
    for (int i = 0; i < 100; ++i) {
        const RealVec y = rng.uniform(0.05, 0.9) * rng.unitVec(3);
        MinimalBallFamily minimal(y);
        QBallFamily q1(y, 1.0);
        const RealVec x = rng.vec(3, -1.0, 1.0);
        const double fq = q1.levelFunctionOrInf(x);
        const double fm = minimal.levelFunctionOrInf(y - x);
        if (!std::isfinite(fq) || !std::isfinite(fm)) continue;
        CHECK(std::abs(fq - fm) < 1e-12 * (1.0 + fm));
        // same ball geometry up to the reflection
        const double s = rng.uniform(0.1, 2.0);
        CHECK(q1.radius(s) == doctest::Approx(minimal.radius(s)).epsilon(1e-14));
        CHECK(((y - q1.centre(s)) - minimal.centre(s)).norm() < 1e-14);
    }
}

TEST_CASE("self-check flag validates the defining identity") {
    MinimalBallFamily fam(RealVec{0.4, 0.1, 0.0});
    fam.selfCheck = true;
    CHECK_NOTHROW(fam.levelFunction(RealVec{0.2, 0.5, -0.3}));
}

TEST_CASE("inadmissible centres are rejected") {
    CHECK_THROWS_AS(MinimalBallFamily(RealVec{1.0, 0, 0}), DomainError);
    CHECK_THROWS_AS(QBallFamily(RealVec{0.8, 0, 0}, 2.0), DomainError);  // q|y|^2 >= 1
    CHECK_THROWS_AS(QBallFamily(RealVec{0.1, 0, 0}, 0.5), DomainError);  // q < 1
}
