// Acceptance suite: one pass/fail line per criterion, covering the equality
// cases, both forms of each monotonicity identity, the sharp area bound,
// the comparison-field divergence identity, the corrected-quantity sign
// pins, the entropy scan, the p-harmonic matrix, the stationarity self-test
// and the classical fixed-centre reductions. Exits nonzero if any criterion
// fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mcmono/ball_family.hpp"
#include "mcmono/catalog.hpp"
#include "mcmono/heatflow_mono.hpp"
#include "mcmono/mcf_mono.hpp"
#include "mcmono/minimal_mono.hpp"
#include "mcmono/pharmonic_mono.hpp"
#include "mcmono/rng.hpp"

using namespace mcm;

namespace {

int failures = 0;

class Criterion {
public:
    explicit Criterion(std::string name) : name_(std::move(name)) {
        start_ = std::chrono::steady_clock::now();
    }
    void check(bool ok, const std::string& detail) {
        if (!ok) {
            pass_ = false;
            details_ += (details_.empty() ? "" : "; ") + detail;
        }
    }
    void note(const std::string& text) {
        details_ += (details_.empty() ? "" : "; ") + text;
    }
    void budget(double seconds) { budget_ = seconds; }
    ~Criterion() {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (budget_ > 0 && wall > budget_) {
            pass_ = false;
            details_ += (details_.empty() ? "" : "; ") + std::string("runtime ") +
                        std::to_string(wall) + " s over budget " + std::to_string(budget_);
        }
        std::printf("[%s] %s (%.1f s%s%s)\n", pass_ ? "PASS" : "FAIL", name_.c_str(), wall,
                    details_.empty() ? "" : "; ", details_.c_str());
        std::fflush(stdout);
        if (!pass_) ++failures;
    }

private:
    std::string name_;
    std::string details_;
    bool pass_ = true;
    double budget_ = 0.0;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

const QuadratureSpec kMinSpec = [] {
    QuadratureSpec s;
    s.refinementDepth = 8;
    return s;
}();

void criterion1() {
    Criterion c("C1 equality-case constancy: orthogonal flat disk");
    c.budget(10.0);
    const auto grid = geometricGrid(1e-3, 1.0, 64);
    for (double yn : {0.0, 0.3, 0.5, 0.8}) {
        const RealVec y{yn, 0, 0};
        MinimalBallFamily fam(y);
        const Surface disk = catalogFlatDisk(y, yn > 0, 0.0);
        const double expected = M_PI * (1.0 - yn * yn);
        double lo = 1e300, hi = -1e300;
        for (double s : grid) {
            const double r = areaRatio(disk, fam, s, kMinSpec);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        c.check(hi - lo <= 1e-6, "|y|=" + fmt(yn) + " range " + fmt(hi - lo));
        c.check(std::abs(hi - expected) <= 1e-6 && std::abs(lo - expected) <= 1e-6,
                "|y|=" + fmt(yn) + " value off by " +
                    fmt(std::max(std::abs(hi - expected), std::abs(lo - expected))));
    }
}

void criterion2and3() {
    struct Case {
        Surface surf;
        RealVec y;
        const char* tag;
    };
    const std::vector<Case> cases = {
        {catalogTiltedPlane(RealVec{0.3, 0, 0}, 30.0), RealVec{0.3, 0, 0}, "tilted-plane"},
        {catalogCatenoid(0.5), RealVec{0.5, 0, 0}, "catenoid"},
    };
    {
        Criterion c("C2 differential-form identity: flux equals d/ds ratio");
        c.budget(60.0);
        for (const auto& cs : cases) {
            MinimalBallFamily fam(cs.y);
            const auto grid = geometricGrid(1e-3, 1.0, 32);
            const MinimalMonoReport rep = minimalMonoReport(cs.surf, fam, grid, kMinSpec);
            double worst = 0.0;
            for (double r : rep.residualDiff) worst = std::max(worst, r);
            c.check(rep.identityDiff,
                    std::string(cs.tag) + " worst diff residual " + fmt(worst));
        }
    }
    {
        Criterion c("C3 integral-form identity: bulk equals ratio difference");
        for (const auto& cs : cases) {
            MinimalBallFamily fam(cs.y);
            const auto grid = geometricGrid(1e-3, 1.0, 32);
            // cumulative band integrals give every grid pair by telescoping
            std::vector<double> ratio, cumBulk;
            const MinimalMonoReport rep = minimalMonoReport(cs.surf, fam, grid, kMinSpec);
            double acc = 0.0;
            cumBulk.push_back(0.0);
            for (std::size_t i = 1; i < grid.size(); ++i) {
                acc += rep.bulkIncrement[i];
                cumBulk.push_back(acc);
            }
            double worst = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i)
                for (std::size_t j = i + 1; j < grid.size(); ++j) {
                    const double res =
                        std::abs(rep.ratio[j] - rep.ratio[i] - (cumBulk[j] - cumBulk[i])) /
                        (1.0 + std::abs(rep.ratio[j]));
                    worst = std::max(worst, res);
                }
            c.check(worst <= 1e-4, std::string(cs.tag) + " worst pair residual " + fmt(worst));
        }
    }
}

void criterion4() {
    Criterion c("C4 sharp area bound: catenoid through its nearest point");
    const RealVec y{0.5, 0, 0};
    MinimalBallFamily fam(y);
    const Surface cat = catalogCatenoid(0.5);
    const BrendleHungReport rep =
        brendleHungCheck(cat, fam, geometricGrid(1e-3, 1.0, 32), kMinSpec);
    c.check(rep.monotone, "ratio not monotone");
    c.check(rep.ratio.back() > 0.75 * M_PI, "no strict margin");
    c.check(rep.margin > 0.0, "margin nonpositive");
    c.note("margin " + fmt(rep.margin) + " over " + fmt(0.75 * M_PI));
}

void criterion5() {
    Criterion c("C5 comparison-field divergence identity, k = 2 and k = 3");
    Rng rng(2024);
    struct Entry {
        PatchPtr patch;
        RealVec y;
        const char* tag;
    };
    std::vector<RealVec> basis3{RealVec{0.1, 1, 0, 0}, RealVec{0, 0, 1, 0},
                                RealVec{-0.05, 0, 0, 1}};
    const std::vector<Entry> entries = {
        {catalogTiltedPlane(RealVec{0.3, 0, 0}, 30.0).charts[0], RealVec{0.3, 0, 0},
         "tilted-plane"},
        {catalogCatenoid(0.5).charts[0], RealVec{0.5, 0, 0}, "catenoid(k=2,log-branch)"},
        {catalogHelicoid(0.5).charts[0], RealVec{0.25, 0, 0}, "helicoid"},
        {makeAffinePatch(RealVec::zero(4), basis3,
                         Box{RealVec{-1.2, -1.2, -1.2}, RealVec{1.2, 1.2, 1.2}}, "plane3"),
         RealVec{0.3, 0, 0, 0}, "plane3(k=3)"},
        {makeCatenoidLinePatch(0.5, 0.8, 1.1), RealVec{0.3, 0, 0, 0}, "catenoid-line(k=3)"},
    };
    for (const auto& e : entries) {
        MinimalBallFamily fam(e.y);
        const Box box = e.patch->domain();
        const int k = e.patch->paramDim();
        int checked = 0;
        double worst = 0.0;
        for (int i = 0; i < 4000 && checked < 100; ++i) {
            RealVec u(k);
            for (int a = 0; a < k; ++a)
                u[a] = box.lo[a] + box.width(a) * rng.uniform(0.05, 0.95);
            const double f = fam.levelFunctionOrInf(e.patch->embed(u));
            if (!(f > 1e-3) || !(f < 5.0)) continue;
            const BHFieldSample s = bhFieldIdentity(*e.patch, fam, u);
            worst = std::max(worst, std::abs(s.divNumeric - s.divClosedForm) /
                                        (1.0 + std::abs(s.divClosedForm)));
            ++checked;
        }
        c.check(checked == 100, std::string(e.tag) + " only " + std::to_string(checked) +
                                    " admissible samples");
        c.check(worst <= 1e-6, std::string(e.tag) + " worst residual " + fmt(worst));
    }
}

void criterion6() {
    Criterion c("C6 almost-monotonicity with the mean-curvature factor");
    const RealVec y{0.3, 0, 0};
    MinimalBallFamily fam(y);
    const Surface cap = catalogSphereCap(y);
    const auto grid = geometricGrid(1e-3, 1.0, 64);
    const MinimalMonoReport rep =
        minimalMonoReport(cap, fam, grid, kMinSpec, MonoTolerances{}, cap.meanCurvatureBound);
    c.check(rep.monotone, "corrected ratio not nondecreasing");
}

void criterion7() {
    Criterion c("C7 moving-centre flow identity across flows and paths");
    c.budget(120.0);
    const QuadratureSpec spec;
    const FlowPtr plane = makeStaticPlaneFlow(RealVec::zero(3), RealVec{0, 0, 1}, 40.0);
    const FlowPtr sphere = makeShrinkingSphereFlow();
    const FlowPtr cylinder = makeShrinkingCylinderFlow();
    struct FlowCase {
        FlowPtr flow;
        double t0;
        double tLo, tHi;
        const char* tag;
    };
    const std::vector<FlowCase> flows = {
        {plane, 0.5, -1.6, 0.1, "plane"},
        {sphere, 0.0, -2.0, -0.25, "sphere"},
        {cylinder, 0.0, -2.0, -0.25, "cylinder"},
    };
    for (const auto& fc : flows) {
        const std::vector<CentrePath> paths = {
            constantPath(RealVec{0.15, -0.1, 0.2}),
            linearPath(RealVec{0.05, 0.1, 0}, RealVec{0.2, -0.15, 0.25}),
            circularPath(0.25, 3),
        };
        std::vector<double> times;
        for (int i = 0; i < 16; ++i)
            times.push_back(fc.tLo + (fc.tHi - fc.tLo) * i / 15.0);
        for (const auto& path : paths) {
            GaussianWeight w{2, fc.t0, path};
            const McfSeries series = mcfSeries(*fc.flow, w, times, spec);
            c.check(series.identity, std::string(fc.tag) + "/" + path.label +
                                         " worst residual " + fmt(series.worstResidual));
            c.check(series.correctedMonotone,
                    std::string(fc.tag) + "/" + path.label + " corrected not monotone");
        }
    }
}

void criterion8() {
    Criterion c("C8 corrected-quantity equality case pins the exponential sign");
    const QuadratureSpec spec;
    const FlowPtr plane = makeStaticPlaneFlow(RealVec::zero(3), RealVec{0, 0, 1}, 40.0);
    GaussianWeight w{2, 0.5, approachPath(RealVec::zero(3), RealVec{0, 0, 0.8}, 0.5)};
    double worst = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double t = -2.0 + 2.3 * i / 15.0;
        worst = std::max(worst, std::abs(correctedQuantity(*plane, w, t, spec) - 1.0));
    }
    c.check(worst <= 1e-8, "deviation from 1 is " + fmt(worst));
}

void criterion9() {
    Criterion c("C9 entropy scan on the self-shrinking circle");
    const QuadratureSpec spec;
    auto circle = makeShrinkerCircle();
    bool peakChecked = false;
    for (const RealVec& y : {RealVec{1.0, 0.0}, RealVec{0.6, 0.8}}) {
        for (double a : {-0.25, 0.0, 0.5}) {
            std::vector<double> grid;
            const double sMax = a < 0.0 ? 1.5 : 1.8;  // keep 1 + a s^2 positive
            for (int i = 0; i < 24; ++i) grid.push_back(sMax * i / 23.0);
            const EntropyScan scan = entropyScan(*circle, y, a, grid, spec);
            if (!peakChecked) {
                c.check(std::abs(scan.gaussianArea.front() - 1.520347) <= 1e-4,
                        "peak value " + fmt(scan.gaussianArea.front()));
                peakChecked = true;
            }
            const std::string tag = "y=(" + fmt(y[0]) + "," + fmt(y[1]) + "),a=" + fmt(a);
            c.check(scan.nonincreasing, tag + " not nonincreasing");
            c.check(scan.maxAtZero, tag + " max not at s=0");
            c.check(scan.identity, tag + " derivative identity fails");
        }
    }
}

void criterion10and11() {
    SmallMat a(3, 3);
    a(0, 0) = 0.6;
    a(0, 1) = 0.2;
    a(1, 0) = -0.1;
    a(1, 1) = 0.5;
    a(1, 2) = 0.3;
    a(2, 1) = 0.1;
    a(2, 2) = 0.4;
    const std::vector<std::pair<MapPtr, const char*>> maps = {
        {makeConstantMap(3, RealVec{0.3, -0.1, 0.7}), "constant"},
        {makeLinearMap(a), "linear"},
        {makeRadialMap(), "radial"},
    };
    {
        Criterion c("C10 p-harmonic identities across maps, q and centres");
        c.budget(120.0);
        const QuadratureSpec spec;
        for (const auto& [map, tag] : maps) {
            for (double q : {1.0, 1.5, 2.0}) {
                for (double yn : {0.0, 0.4}) {
                    QBallFamily fam(RealVec{yn, 0, 0}, q);
                    const PharmReport rep =
                        pharmReport(*map, fam, geometricGrid(0.05, 1.0, 16), spec);
                    const std::string id =
                        std::string(tag) + ",q=" + fmt(q) + ",|y|=" + fmt(yn);
                    c.check(rep.identityDiff, id + " differential identity");
                    c.check(rep.identityInt, id + " integral identity");
                    c.check(rep.interpolatedMonotone, id + " interpolated quantity");
                    c.check(rep.rigidityConsistent, id + " rigidity");
                }
            }
        }
    }
    {
        Criterion c("C11 inner-variation stationarity self-test");
        const QuadratureSpec spec;
        Rng rng(4096);
        const Box box{RealVec{0.3, 0.2, 0.25}, RealVec{1.3, 1.1, 1.2}};
        for (const auto& [map, tag] : maps) {
            double worst = 0.0;
            for (int i = 0; i < 10; ++i) {
                const PolyVectorField x = PolyVectorField::random(3, 3, rng);
                worst = std::max(worst, stationarityCheck(*map, box, x, spec));
            }
            c.check(worst <= 1e-6, std::string(tag) + " worst residual " + fmt(worst));
        }
    }
}

void criterion12() {
    Criterion c("C12 heat-flow oracles: linear closed form and kernel identity");
    const QuadratureSpec spec;
    const RealVec aVec{0.6, -0.3, 0.2};
    const double a2 = aVec.normSq();
    const HeatFlowPtr linear = makeLinearHeatFlow(aVec);
    HeatWeight w{3, 0.5, linearPath(RealVec{0.1, 0, 0.2}, RealVec{0.3, 0.2, -0.1})};
    double worstE = 0.0, worstD = 0.0;
    for (double t : {-2.0, -1.2, -0.6, 0.1}) {
        const double tau = 0.5 - t;
        const double e = weightedEnergy(*linear, w, t, spec);
        worstE = std::max(worstE, std::abs(e / (4.0 * M_PI * tau * a2) - 1.0));
        const HeatRhs rhs = heatRhs(*linear, w, t, spec);
        worstD = std::max(worstD,
                          std::abs((-rhs.dissipation + rhs.excess) / (-4.0 * M_PI * a2) - 1.0));
    }
    c.check(worstE <= 1e-10, "energy closed form off by " + fmt(worstE));
    c.check(worstD <= 1e-6, "derivative closed form off by " + fmt(worstD));

    std::vector<double> times{-1.5, -1.0, -0.5, 0.0};
    const HeatSeries lin = heatSeries(*linear, w, times, spec);
    c.check(lin.correctedMonotone, "linear corrected quantity not monotone");

    const HeatFlowPtr kernel = makeHeatKernelFlow(-3.0);
    HeatWeight wk{3, 0.5, parabolicPath(0.3, 3)};
    const HeatSeries ker = heatSeries(*kernel, wk, times, spec);
    c.check(ker.identity, "kernel identity residual " + fmt(ker.worstResidual));
    c.check(ker.correctedMonotone, "kernel corrected quantity not monotone");
}

void criterion13() {
    Criterion c("C13 classical fixed-centre reductions");
    // minimal: centred family equals the classical area ratio
    {
        MinimalBallFamily fam(RealVec::zero(3));
        const Surface cat = catalogCatenoid(0.5);
        const ScalarField normSq{[](const RealVec& x) { return x.normSq(); },
                                 [](const RealVec& x) { return 2.0 * x; }};
        double worst = 0.0;
        bool monotone = true;
        double prev = -1e300;
        for (double s : geometricGrid(0.3, 1.0, 8)) {
            const double viaFamily = areaRatio(cat, fam, s, kMinSpec);
            const double classical =
                integrateSublevel(*cat.charts[0], normSq, s,
                                  [](const PatchPoint&) { return 1.0; }, kMinSpec)
                    .value /
                s;
            worst = std::max(worst, std::abs(viaFamily - classical) / (1.0 + classical));
            if (viaFamily < prev - 1e-8 * (1.0 + std::abs(prev))) monotone = false;
            prev = viaFamily;
        }
        c.check(worst <= 1e-10, "centred family vs classical ratio " + fmt(worst));
        c.check(monotone, "classical ratio not monotone");
    }
    // mean curvature flow: constant centre kills the excess term
    {
        const QuadratureSpec spec;
        const FlowPtr sphere = makeShrinkingSphereFlow();
        GaussianWeight w{2, 0.0, constantPath(RealVec{0.1, 0.2, 0.0})};
        const McfRhs rhs = mcfRhs(*sphere, w, -1.0, spec);
        c.check(rhs.excess == 0.0, "flow excess nonzero with a fixed centre");
        std::vector<double> times{-2.0, -1.2, -0.6};
        const McfSeries series = mcfSeries(*sphere, w, times, spec);
        c.check(series.identity, "fixed-centre flow identity");
    }
    // p-harmonic: the classical ratio of the radial projection is 8 pi
    {
        const QuadratureSpec spec;
        auto rmap = makeRadialMap();
        QBallFamily fam(RealVec::zero(3), 2.0);
        double worst = 0.0;
        for (double s : {0.05, 0.3, 1.0})
            worst = std::max(worst,
                             std::abs(energyRatio(*rmap, fam, s, spec) / (8.0 * M_PI) - 1.0));
        c.check(worst <= 1e-4, "radial ratio vs 8 pi: " + fmt(worst));
    }
    // heat flow: constant centre kills the excess term
    {
        const QuadratureSpec spec;
        const HeatFlowPtr kernel = makeHeatKernelFlow(-3.0);
        HeatWeight w{3, 0.5, constantPath(RealVec{0.2, 0, 0.1})};
        const HeatRhs rhs = heatRhs(*kernel, w, -0.8, spec);
        c.check(rhs.excess == 0.0, "heat excess nonzero with a fixed centre");
        std::vector<double> times{-1.4, -0.9, -0.4};
        const HeatSeries series = heatSeries(*kernel, w, times, spec);
        c.check(series.identity, "fixed-centre heat identity");
        c.check(series.correctedMonotone, "fixed-centre weighted energy not monotone");
    }
}

}  // namespace

int main() {
    std::puts("acceptance suite");
    criterion1();
    criterion2and3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10and11();
    criterion12();
    criterion13();
    if (failures == 0) {
        std::puts("all criteria passed");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
