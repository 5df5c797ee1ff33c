#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mcmono/heatflow_mono.hpp"
#include "mcmono/rng.hpp"

using namespace mcm;

namespace {
const QuadratureSpec kSpec;
const RealVec kA{0.6, -0.3, 0.2};
}  // namespace

TEST_CASE("catalog flows solve the heat equation") {
    Rng rng(3);
    const std::vector<HeatFlowPtr> flows = {makeZeroHeatFlow(), makeLinearHeatFlow(kA),
                                            makeHeatKernelFlow(-3.0)};
    for (const auto& flow : flows) {
        for (int i = 0; i < 12; ++i) {
            const RealVec x = rng.vec(3, -2.0, 2.0);
            const double t = rng.uniform(-1.5, 0.3);
            // du/dt against the finite-difference Laplacian (flat target)
            const double h = 1e-4;
            double laplace = 0.0;
            for (int a = 0; a < 3; ++a) {
                RealVec xp = x, xm = x;
                xp[a] += h;
                xm[a] -= h;
                laplace += (flow->value(xp, t)[0] - 2.0 * flow->value(x, t)[0] +
                            flow->value(xm, t)[0]) /
                           (h * h);
            }
            CHECK(std::abs(flow->timeDerivative(x, t)[0] - laplace) < 1e-6);
            // analytic spatial gradient against finite differences
            const SmallMat g = flow->gradient(x, t);
            for (int a = 0; a < 3; ++a) {
                RealVec xp = x, xm = x;
                xp[a] += 1e-6;
                xm[a] -= 1e-6;
                const double fd = (flow->value(xp, t)[0] - flow->value(xm, t)[0]) / 2e-6;
                CHECK(std::abs(g(a, 0) - fd) < 1e-7 * (1.0 + std::abs(fd)));
            }
            CHECK(g.frobeniusSq() <= flow->gradientBound() * flow->gradientBound() + 1e-12);
        }
    }
}

TEST_CASE("weighted energy closed forms") {
    SUBCASE("zero map") {
        HeatWeight w{3, 0.5, constantPath(RealVec::zero(3))};
        CHECK(weightedEnergy(*makeZeroHeatFlow(), w, -1.0, kSpec) == 0.0);
    }
    SUBCASE("static linear map for any centre path") {
        const HeatFlowPtr flow = makeLinearHeatFlow(kA);
        const double a2 = kA.normSq();
        const std::vector<CentrePath> paths = {constantPath(RealVec{0.3, 0.1, -0.2}),
                                               linearPath(RealVec::zero(3), RealVec{1, 2, 0}),
                                               circularPath(0.4, 3)};
        for (const auto& path : paths) {
            HeatWeight w{3, 0.5, path};
            for (double t : {-2.0, -0.4, 0.2}) {
                const double tau = 0.5 - t;
                CHECK(weightedEnergy(*flow, w, t, kSpec) ==
                      doctest::Approx(4.0 * M_PI * tau * a2).epsilon(1e-12));
            }
        }
    }
    SUBCASE("heat kernel against a dense-grid reference") {
        const HeatFlowPtr flow = makeHeatKernelFlow(-3.0);
        HeatWeight w{3, 0.5, constantPath(RealVec{0.2, 0.1, -0.1})};
        const double t = -0.5, tau = 1.0;
        const double val = weightedEnergy(*flow, w, t, kSpec);
        // midpoint reference on a uniform grid; the integrand decays fast
        const double L = 9.0;
        const int n = 160;
        double ref = 0.0;
        const RealVec y = w.centre.y(t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    RealVec x{-L + 2.0 * L * (i + 0.5) / n, -L + 2.0 * L * (j + 0.5) / n,
                              -L + 2.0 * L * (k + 0.5) / n};
                    const double g2 = flow->gradient(x, t).frobeniusSq();
                    if (g2 == 0.0) continue;
                    ref += g2 * std::pow(4.0 * M_PI * tau, -0.5) *
                           std::exp(-distSq(x, y) / (4.0 * tau));
                }
        ref *= std::pow(2.0 * L / n, 3);
        CHECK(std::abs(val - ref) <= 1e-5 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("derivative structure of the weighted energy") {
    SUBCASE("static linear map: the path terms cancel exactly") {
        const HeatFlowPtr flow = makeLinearHeatFlow(kA);
        const double a2 = kA.normSq();
        const std::vector<CentrePath> paths = {constantPath(RealVec{0.1, 0, 0.2}),
                                               linearPath(RealVec{0, 0.1, 0}, RealVec{2, -1, 1})};
        for (const auto& path : paths) {
            HeatWeight w{3, 0.5, path};
            const HeatRhs rhs = heatRhs(*flow, w, -0.7, kSpec);
            CHECK(-rhs.dissipation + rhs.excess ==
                  doctest::Approx(-4.0 * M_PI * a2).epsilon(1e-6));
        }
    }
    SUBCASE("identity against finite differences across the catalog") {
        const std::vector<HeatFlowPtr> flows = {makeLinearHeatFlow(kA),
                                                makeHeatKernelFlow(-3.0)};
        const std::vector<CentrePath> paths = {
            constantPath(RealVec{0.2, -0.1, 0.1}),
            linearPath(RealVec{0.1, 0, 0}, RealVec{0.4, 0.2, -0.3}),
            circularPath(0.3, 3),
            parabolicPath(0.3, 3),
        };
        for (const auto& flow : flows) {
            for (const auto& path : paths) {
                HeatWeight w{3, 0.5, path};
                std::vector<double> times{-1.5, -0.9, -0.3, 0.1};
                const HeatSeries series = heatSeries(*flow, w, times, kSpec);
                CHECK(series.identity);
                CHECK(series.correctedMonotone);
            }
        }
    }
}

TEST_CASE("corrected quantity") {
    SUBCASE("closed form for the linear map on a straight path") {
        const HeatFlowPtr flow = makeLinearHeatFlow(kA);
        const RealVec v{0.5, -0.2, 0.4};
        HeatWeight w{3, 0.5, linearPath(RealVec{0.1, 0.2, 0}, v)};
        const double a2 = kA.normSq();
        double prev = 1e300;
        for (double t : {-2.0, -1.2, -0.5, 0.1}) {
            const double tau = 0.5 - t;
            const double expected =
                std::exp(0.5 * v.normSq() * tau) * 4.0 * M_PI * tau * a2;
            const double got = heatCorrectedQuantity(*flow, w, t, kSpec);
            CHECK(got == doctest::Approx(expected).epsilon(1e-10));
            CHECK(got < prev + 1e-10);
            prev = got;
        }
    }
    SUBCASE("constant centre reduces to the plain weighted energy") {
        const HeatFlowPtr flow = makeHeatKernelFlow(-3.0);
        HeatWeight w{3, 0.5, constantPath(RealVec{0.3, 0, 0})};
        for (double t : {-1.0, -0.2})
            CHECK(heatCorrectedQuantity(*flow, w, t, kSpec) ==
                  doctest::Approx(weightedEnergy(*flow, w, t, kSpec)).epsilon(1e-13));
    }
    SUBCASE("zero map stays zero") {
        HeatWeight w{3, 0.5, linearPath(RealVec::zero(3), RealVec{1, 1, 0})};
        CHECK(heatCorrectedQuantity(*makeZeroHeatFlow(), w, -1.0, kSpec) == 0.0);
    }
}

TEST_CASE("time-domain guards") {
    const HeatFlowPtr flow = makeLinearHeatFlow(kA);
    HeatWeight w{3, 0.5, constantPath(RealVec::zero(3))};
    CHECK_THROWS_AS(weightedEnergy(*flow, w, 0.5, kSpec), DomainError);
    CHECK_THROWS_AS(weightedEnergy(*flow, w, 1.0, kSpec), DomainError);
    const HeatFlowPtr kernel = makeHeatKernelFlow(-0.2);
    CHECK_THROWS_AS(weightedEnergy(*kernel, w, -0.18, kSpec), DomainError);
}
