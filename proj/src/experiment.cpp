#include "mcmono/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "mcmono/ball_family.hpp"
#include "mcmono/catalog.hpp"
#include "mcmono/errors.hpp"
#include "mcmono/heatflow_mono.hpp"
#include "mcmono/mcf_mono.hpp"
#include "mcmono/minimal_mono.hpp"
#include "mcmono/output.hpp"
#include "mcmono/pharmonic_mono.hpp"
#include "mcmono/verify.hpp"

namespace mcm {

namespace {

double parseDouble(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': cannot parse number '" + value + "'");
    }
}

int parseInt(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': cannot parse integer '" + value + "'");
    }
}

bool parseBool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value.empty()) return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("field '" + key + "': cannot parse boolean '" + value + "'");
}

RealVec parseVec(const std::string& key, const std::string& value, int dim) {
    std::vector<double> parts;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(parseDouble(key, tok));
    if (static_cast<int>(parts.size()) != dim)
        throw ConfigError("field '" + key + "': expected " + std::to_string(dim) +
                          " components in '" + value + "'");
    RealVec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = parts[i];
    return v;
}

struct GridRange {
    double lo, hi;
    int count;
};

GridRange parseRange(const std::string& key, const std::string& value) {
    std::stringstream ss(value);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
        throw ConfigError("field '" + key + "': expected lo:hi:count in '" + value + "'");
    GridRange r{parseDouble(key, a), parseDouble(key, b), parseInt(key, c)};
    if (r.count < 2 || !(r.hi > r.lo))
        throw ConfigError("field '" + key + "': need lo < hi and count >= 2");
    return r;
}

std::vector<double> uniformGrid(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
    return g;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "command") command = value;
    else if (key == "surface") surface = value;
    else if (key == "flow") flow = value;
    else if (key == "shrinker") shrinker = value;
    else if (key == "map") map = value;
    else if (key == "path") path = value;
    else if (key == "y") y = value;
    else if (key == "y0") y0 = value;
    else if (key == "orient_normal_to_y") orientNormalToY = parseBool(key, value);
    else if (key == "tilt") tilt = parseDouble(key, value);
    else if (key == "neck") neck = parseDouble(key, value);
    else if (key == "pitch") pitch = parseDouble(key, value);
    else if (key == "q") q = parseDouble(key, value);
    else if (key == "c_h") cH = parseDouble(key, value);
    else if (key == "t0") t0 = parseDouble(key, value);
    else if (key == "a") a = parseDouble(key, value);
    else if (key == "s") sRange = value;
    else if (key == "t") tRange = value;
    else if (key == "quad_cells") quadCells = parseInt(key, value);
    else if (key == "quad_order") quadOrder = parseInt(key, value);
    else if (key == "quad_depth") quadDepth = parseInt(key, value);
    else if (key == "tol") tol = parseDouble(key, value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "out_csv") outCsv = value;
    else if (key == "out_svg") outSvg = value;
    else if (key == "inject") inject = value;
    else throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::fromKeyValueText(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(ss, line)) {
        ++lineNo;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineNo) + ": expected 'key = value'");
        try {
            cfg.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
    return cfg;
}

std::string ExperimentConfig::toCanonicalText() const {
    std::string out;
    auto emitS = [&](const char* key, const std::optional<std::string>& v) {
        if (v) out += std::string(key) + " = " + *v + "\n";
    };
    auto emitD = [&](const char* key, const std::optional<double>& v) {
        if (v) out += std::string(key) + " = " + formatDouble(*v) + "\n";
    };
    auto emitI = [&](const char* key, const std::optional<int>& v) {
        if (v) out += std::string(key) + " = " + std::to_string(*v) + "\n";
    };
    out += "command = " + command + "\n";
    emitS("surface", surface);
    emitS("flow", flow);
    emitS("shrinker", shrinker);
    emitS("map", map);
    emitS("path", path);
    emitS("y", y);
    emitS("y0", y0);
    if (orientNormalToY)
        out += std::string("orient_normal_to_y = ") + (*orientNormalToY ? "true" : "false") + "\n";
    emitD("tilt", tilt);
    emitD("neck", neck);
    emitD("pitch", pitch);
    emitD("q", q);
    emitD("c_h", cH);
    emitD("t0", t0);
    emitD("a", a);
    emitS("s", sRange);
    emitS("t", tRange);
    emitI("quad_cells", quadCells);
    emitI("quad_order", quadOrder);
    emitI("quad_depth", quadDepth);
    emitD("tol", tol);
    if (seed) out += "seed = " + std::to_string(*seed) + "\n";
    emitS("out_csv", outCsv);
    emitS("out_svg", outSvg);
    emitS("inject", inject);
    return out;
}

bool VerdictRecord::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string VerdictRecord::summary() const {
    std::string out = "experiment " + id + "\n";
    for (const auto& c : checks) {
        out += std::string(c.pass ? "  [pass] " : "  [FAIL] ") + c.name +
               "  residual=" + formatDouble(c.residual) + "  tol=" + formatDouble(c.tolerance) +
               "\n";
    }
    out += std::string("verdict: ") + (pass() ? "PASS" : "FAIL") +
           "  worst_residual=" + formatDouble(worstResidual) +
           "  quad_bound=" + formatDouble(quadBound) + "  wall_s=" + formatDouble(wallSeconds) +
           "\n";
    return out;
}

namespace {

QuadratureSpec specFromConfig(const ExperimentConfig& cfg, int cells, int order, int depth) {
    QuadratureSpec spec;
    spec.cellsPerAxis = cfg.quadCells.value_or(cells);
    spec.order = cfg.quadOrder.value_or(order);
    spec.refinementDepth = cfg.quadDepth.value_or(depth);
    spec.validate();
    return spec;
}

struct MinimalSetup {
    Surface surface;
    MinimalBallFamily family;
    double cH = 0.0;
};

MinimalSetup buildMinimalSetup(const ExperimentConfig& cfg) {
    if (!cfg.surface) throw ConfigError("min-mono/bh-check require 'surface'");
    const std::string& name = *cfg.surface;
    const double neck = cfg.neck.value_or(0.5);
    const double pitch = cfg.pitch.value_or(0.5);

    RealVec yv(3);
    const std::string yRaw = cfg.y.value_or("0,0,0");
    if (yRaw == "on-surface-nearest-origin") {
        if (name == "catenoid") yv = RealVec{neck, 0.0, 0.0};
        else if (name == "helicoid") yv = RealVec::zero(3);
        else throw ConfigError("'on-surface-nearest-origin' defined for catenoid/helicoid");
    } else {
        yv = parseVec("y", yRaw, 3);
    }

    Surface surf;
    double cH = cfg.cH.value_or(0.0);
    if (name == "flat-disk") {
        surf = catalogFlatDisk(yv, cfg.orientNormalToY.value_or(false), cfg.tilt.value_or(0.0));
    } else if (name == "tilted-plane") {
        surf = catalogTiltedPlane(yv, cfg.tilt.value_or(30.0));
    } else if (name == "catenoid") {
        surf = catalogCatenoid(neck);
    } else if (name == "helicoid") {
        surf = catalogHelicoid(pitch);
    } else if (name == "sphere-cap") {
        surf = catalogSphereCap(yv);
        if (!cfg.cH) cH = surf.meanCurvatureBound;
    } else if (name == "plane-pair") {
        surf = catalogPlanePair(yv);
    } else {
        throw ConfigError("unknown surface '" + name + "'");
    }
    return {std::move(surf), MinimalBallFamily(yv), cH};
}

VerdictRecord runMinMono(const ExperimentConfig& cfg) {
    MinimalSetup setup = buildMinimalSetup(cfg);
    const GridRange r = parseRange("s", cfg.sRange.value_or("1e-3:1:64"));
    const std::vector<double> grid = geometricGrid(r.lo, r.hi, r.count);
    const QuadratureSpec spec = specFromConfig(cfg, 8, 7, 8);

    MonoTolerances tol;
    if (cfg.tol) {
        tol.diffRel = *cfg.tol;
        tol.intRel = *cfg.tol * 0.1;
    }
    const bool negate = cfg.inject.value_or("") == "negate-flux";
    const MinimalMonoReport rep =
        minimalMonoReport(setup.surface, setup.family, grid, spec, tol, setup.cH, negate);

    SeriesTable table;
    table.addColumn("s", rep.grid);
    table.addColumn("ratio", rep.ratio);
    if (setup.cH > 0.0) {
        table.addColumn("corrected_quantity", rep.corrected);
    } else {
        table.addColumn("boundary_flux", rep.boundaryFlux);
        table.addColumn("fd_derivative", rep.fdDerivative);
        table.addColumn("bulk_increment", rep.bulkIncrement);
        std::vector<double> residual;
        for (std::size_t i = 0; i < rep.residualDiff.size(); ++i)
            residual.push_back(std::max(rep.residualDiff[i], rep.residualInt[i]));
        table.addColumn("residual", residual);
    }
    if (cfg.outCsv) table.writeCsv(*cfg.outCsv);
    if (cfg.outSvg)
        table.writeSvg(*cfg.outSvg,
                       {setup.cH > 0.0 ? "corrected_quantity" : "ratio"},
                       "min-mono " + setup.surface.label);

    VerdictRecord v;
    v.id = "min-mono " + setup.surface.label;
    v.quadBound = rep.quadBound;
    v.worstResidual = rep.worstResidual;
    v.checks.push_back({"monotone", rep.monotone, 0.0, 1e-8});
    if (setup.cH == 0.0 && setup.surface.minimal) {
        double worstDiff = 0.0, worstInt = 0.0;
        for (double x : rep.residualDiff) worstDiff = std::max(worstDiff, x);
        for (double x : rep.residualInt) worstInt = std::max(worstInt, x);
        v.checks.push_back({"differential-identity", rep.identityDiff, worstDiff, tol.diffRel});
        v.checks.push_back({"integral-identity", rep.identityInt, worstInt, tol.intRel});
    }
    return v;
}

VerdictRecord runBhCheck(const ExperimentConfig& cfg) {
    MinimalSetup setup = buildMinimalSetup(cfg);
    const GridRange r = parseRange("s", cfg.sRange.value_or("1e-3:1:32"));
    const std::vector<double> grid = geometricGrid(r.lo, r.hi, r.count);
    const QuadratureSpec spec = specFromConfig(cfg, 8, 7, 8);
    const BrendleHungReport rep = brendleHungCheck(setup.surface, setup.family, grid, spec);

    SeriesTable table;
    table.addColumn("s", rep.grid);
    table.addColumn("ratio", rep.ratio);
    if (cfg.outCsv) table.writeCsv(*cfg.outCsv);
    if (cfg.outSvg) table.writeSvg(*cfg.outSvg, {"ratio"}, "bh-check " + setup.surface.label);

    VerdictRecord v;
    v.id = "bh-check " + setup.surface.label + "  density=" + formatDouble(rep.density) +
           " bound=" + formatDouble(rep.bound) + " margin=" + formatDouble(rep.margin);
    v.checks.push_back({"monotone", rep.monotone, 0.0, 1e-8});
    v.checks.push_back({"area-bound", rep.pass, -rep.margin, 1e-6});
    return v;
}

struct FlowSetup {
    FlowPtr flow;
    CentrePath path;
    double t0;
    int k;
    std::vector<double> times;
};

FlowSetup buildFlowSetup(const ExperimentConfig& cfg) {
    if (!cfg.flow) throw ConfigError("mcf-mono requires 'flow'");
    const std::string& name = *cfg.flow;
    FlowSetup setup;
    RealVec normal{0, 0, 1};
    int dim = 3;
    if (name == "plane") {
        setup.flow = makeStaticPlaneFlow(RealVec::zero(3), normal, 60.0);
        setup.k = 2;
    } else if (name == "sphere") {
        setup.flow = makeShrinkingSphereFlow();
        setup.k = 2;
    } else if (name == "cylinder") {
        setup.flow = makeShrinkingCylinderFlow();
        setup.k = 2;
    } else if (name == "circle") {
        setup.flow = makeShrinkingCircleFlow();
        setup.k = 1;
        dim = 2;
    } else {
        throw ConfigError("unknown flow '" + name + "'");
    }

    const bool staticFlow = name == "plane";
    setup.t0 = cfg.t0.value_or(staticFlow ? 0.5 : 0.0);
    const GridRange tr = parseRange(
        "t", cfg.tRange.value_or(staticFlow ? "-1.5:0.25:16" : "-2:-0.2:16"));
    setup.times = uniformGrid(tr.lo, tr.hi, tr.count);

    RealVec y0v = RealVec::zero(dim);
    if (cfg.y0) {
        if (*cfg.y0 == "normal") {
            if (!staticFlow) throw ConfigError("'normal' path direction needs the plane flow");
            y0v = normal;
        } else {
            y0v = parseVec("y0", *cfg.y0, dim);
        }
    }

    const std::string pathName = cfg.path.value_or("constant");
    if (pathName == "constant") setup.path = constantPath(y0v);
    else if (pathName == "line") setup.path = approachPath(RealVec::zero(dim), y0v, setup.t0);
    else if (pathName == "curved") setup.path = circularPath(0.25, dim);
    else if (pathName == "parabolic") setup.path = parabolicPath(0.25, dim);
    else throw ConfigError("unknown path '" + pathName + "'");
    return setup;
}

VerdictRecord runMcfMono(const ExperimentConfig& cfg) {
    FlowSetup setup = buildFlowSetup(cfg);
    QuadratureSpec spec = specFromConfig(cfg, 8, 7, 4);
    if (cfg.inject.value_or("") == "tolerance-probe") spec.targetTol = 1e-30;
    const double identityTol = cfg.tol.value_or(1e-3);
    GaussianWeight weight{setup.k, setup.t0, setup.path};
    const McfSeries series = mcfSeries(*setup.flow, weight, setup.times, spec, identityTol);

    SeriesTable table;
    table.addColumn("t", series.grid);
    table.addColumn("moving_density", series.movingDensity);
    table.addColumn("dissipation", series.dissipation);
    table.addColumn("excess", series.excess);
    table.addColumn("fd_derivative", series.fdDerivative);
    table.addColumn("corrected_quantity", series.correctedQuantity);
    table.addColumn("residual", series.residual);
    if (cfg.outCsv) table.writeCsv(*cfg.outCsv);
    if (cfg.outSvg)
        table.writeSvg(*cfg.outSvg, {"moving_density", "corrected_quantity"},
                       "mcf-mono " + setup.flow->label());

    VerdictRecord v;
    v.id = "mcf-mono " + setup.flow->label() + " path=" + setup.path.label;
    v.worstResidual = series.worstResidual;
    v.checks.push_back({"identity", series.identity, series.worstResidual, identityTol});
    v.checks.push_back({"corrected-nonincreasing", series.correctedMonotone, 0.0, 1e-8});
    return v;
}

VerdictRecord runEntropy(const ExperimentConfig& cfg) {
    const std::string name = cfg.shrinker.value_or("circle");
    PatchPtr patch;
    int dim = 3;
    if (name == "circle") {
        patch = makeShrinkerCircle();
        dim = 2;
    } else if (name == "plane") {
        patch = makeShrinkerPlane();
    } else if (name == "sphere") {
        patch = makeShrinkerSphere();
    } else if (name == "cylinder") {
        patch = makeShrinkerCylinder();
    } else {
        throw ConfigError("unknown shrinker '" + name + "'");
    }
    const RealVec yv = cfg.y ? parseVec("y", *cfg.y, dim) : RealVec::unit(dim, 0);
    const double aVal = cfg.a.value_or(0.0);
    const GridRange r = parseRange("s", cfg.sRange.value_or("0:1.5:32"));
    const std::vector<double> grid = uniformGrid(r.lo, r.hi, r.count);
    const QuadratureSpec spec = specFromConfig(cfg, 8, 7, 4);
    const double identityTol = cfg.tol.value_or(1e-3);
    const EntropyScan scan = entropyScan(*patch, yv, aVal, grid, spec, identityTol);

    SeriesTable table;
    table.addColumn("s", scan.grid);
    table.addColumn("gaussian_area", scan.gaussianArea);
    table.addColumn("rhs_closed_form", scan.rhsClosedForm);
    table.addColumn("fd_derivative", scan.fdDerivative);
    table.addColumn("residual", scan.residual);
    if (cfg.outCsv) table.writeCsv(*cfg.outCsv);
    if (cfg.outSvg) table.writeSvg(*cfg.outSvg, {"gaussian_area"}, "entropy " + name);

    double worst = 0.0;
    for (double x : scan.residual) worst = std::max(worst, x);
    VerdictRecord v;
    v.id = "entropy " + name + " a=" + formatDouble(aVal);
    v.worstResidual = worst;
    v.checks.push_back({"nonincreasing", scan.nonincreasing, 0.0, 1e-8});
    v.checks.push_back({"max-at-zero", scan.maxAtZero, 0.0, 1e-8});
    v.checks.push_back({"identity", scan.identity, worst, identityTol});
    return v;
}

VerdictRecord runPharmMono(const ExperimentConfig& cfg) {
    const std::string name = cfg.map.value_or("radial");
    MapPtr map;
    if (name == "constant") {
        map = makeConstantMap(3, RealVec{0.3, -0.1, 0.7});
    } else if (name == "linear") {
        SmallMat a(3, 3);
        a(0, 0) = 0.6; a(0, 1) = 0.2; a(1, 0) = -0.1;
        a(1, 1) = 0.5; a(1, 2) = 0.3; a(2, 1) = 0.1; a(2, 2) = 0.4;
        map = makeLinearMap(a);
    } else if (name == "radial") {
        map = makeRadialMap();
    } else {
        throw ConfigError("unknown map '" + name + "'");
    }
    const double qv = cfg.q.value_or(2.0);
    const RealVec yv = cfg.y ? parseVec("y", *cfg.y, 3) : RealVec::zero(3);
    QBallFamily family(yv, qv);
    const GridRange r = parseRange("s", cfg.sRange.value_or("0.05:1:16"));
    const std::vector<double> grid = geometricGrid(r.lo, r.hi, r.count);
    const QuadratureSpec spec = specFromConfig(cfg, 4, 5, 7);

    PharmTolerances tol;
    if (cfg.tol) {
        tol.diffRel = *cfg.tol;
        tol.intRel = *cfg.tol * 0.1;
    }
    const PharmReport rep = pharmReport(*map, family, grid, spec, tol);

    SeriesTable table;
    table.addColumn("s", rep.grid);
    table.addColumn("ratio", rep.ratio);
    table.addColumn("boundary_a", rep.boundaryA);
    table.addColumn("boundary_b", rep.boundaryB);
    table.addColumn("fd_derivative", rep.fdDerivative);
    table.addColumn("bulk_increment", rep.bulkIncrement);
    std::vector<double> residual;
    for (std::size_t i = 0; i < rep.residualDiff.size(); ++i)
        residual.push_back(std::max(rep.residualDiff[i], rep.residualInt[i]));
    table.addColumn("residual", residual);
    if (cfg.outCsv) table.writeCsv(*cfg.outCsv);
    if (cfg.outSvg) table.writeSvg(*cfg.outSvg, {"ratio"}, "pharm-mono " + name);

    VerdictRecord v;
    v.id = "pharm-mono " + name + " q=" + formatDouble(qv);
    v.worstResidual = rep.worstResidual;
    double worstDiff = 0.0, worstInt = 0.0;
    for (double x : rep.residualDiff) worstDiff = std::max(worstDiff, x);
    for (double x : rep.residualInt) worstInt = std::max(worstInt, x);
    v.checks.push_back({"differential-identity", rep.identityDiff, worstDiff, tol.diffRel});
    v.checks.push_back({"integral-identity", rep.identityInt, worstInt, tol.intRel});
    v.checks.push_back({"interpolated-monotone", rep.interpolatedMonotone, 0.0, tol.monoSlack});
    v.checks.push_back({"rigidity", rep.rigidityConsistent, 0.0, 1e-8});
    return v;
}

VerdictRecord runHeatMono(const ExperimentConfig& cfg) {
    const std::string name = cfg.flow.value_or("linear");
    HeatFlowPtr flow;
    if (name == "zero") flow = makeZeroHeatFlow();
    else if (name == "linear") flow = makeLinearHeatFlow(RealVec{0.6, -0.3, 0.2});
    else if (name == "kernel") flow = makeHeatKernelFlow(-3.0);
    else throw ConfigError("unknown flow '" + name + "'");

    const double t0 = cfg.t0.value_or(0.5);
    const GridRange tr = parseRange("t", cfg.tRange.value_or("-1.5:0.25:12"));
    const std::vector<double> times = uniformGrid(tr.lo, tr.hi, tr.count);

    RealVec y0v = RealVec::zero(3);
    if (cfg.y0) y0v = parseVec("y0", *cfg.y0, 3);
    const std::string pathName = cfg.path.value_or("constant");
    CentrePath path;
    if (pathName == "constant") path = constantPath(y0v);
    else if (pathName == "line") path = linearPath(RealVec::zero(3), y0v);
    else if (pathName == "curved") path = circularPath(0.25, 3);
    else if (pathName == "parabolic") path = parabolicPath(0.25, 3);
    else throw ConfigError("unknown path '" + pathName + "'");

    const QuadratureSpec spec = specFromConfig(cfg, 6, 7, 4);
    const double identityTol = cfg.tol.value_or(1e-3);
    HeatWeight weight{flow->domainDim(), t0, path};
    const HeatSeries series = heatSeries(*flow, weight, times, spec, identityTol);

    SeriesTable table;
    table.addColumn("t", series.grid);
    table.addColumn("weighted_energy", series.weightedEnergy);
    table.addColumn("dissipation", series.dissipation);
    table.addColumn("excess", series.excess);
    table.addColumn("fd_derivative", series.fdDerivative);
    table.addColumn("corrected_quantity", series.correctedQuantity);
    table.addColumn("residual", series.residual);
    if (cfg.outCsv) table.writeCsv(*cfg.outCsv);
    if (cfg.outSvg)
        table.writeSvg(*cfg.outSvg, {"weighted_energy", "corrected_quantity"},
                       "heat-mono " + name);

    VerdictRecord v;
    v.id = "heat-mono " + name + " path=" + pathName;
    v.worstResidual = series.worstResidual;
    v.checks.push_back({"identity", series.identity, series.worstResidual, identityTol});
    v.checks.push_back({"corrected-nonincreasing", series.correctedMonotone, 0.0, 1e-8});
    return v;
}

VerdictRecord runIdentitySuiteCmd(const ExperimentConfig& cfg) {
    const std::uint64_t seed = cfg.seed.value_or(20240901ULL);
    const std::vector<CheckResult> results = runIdentitySuite(seed);

    SeriesTable table;
    std::vector<double> samples, worst, tolv, pass;
    std::vector<double> index;
    for (std::size_t i = 0; i < results.size(); ++i) {
        index.push_back(static_cast<double>(i));
        samples.push_back(results[i].samples);
        worst.push_back(results[i].worstResidual);
        tolv.push_back(results[i].tolerance);
        pass.push_back(results[i].pass ? 1.0 : 0.0);
    }
    table.addColumn("check_index", index);
    table.addColumn("samples", samples);
    table.addColumn("worst_residual", worst);
    table.addColumn("tolerance", tolv);
    table.addColumn("pass", pass);
    if (cfg.outCsv) table.writeCsv(*cfg.outCsv);

    VerdictRecord v;
    v.id = "identity-suite seed=" + std::to_string(seed);
    for (const auto& r : results) {
        v.checks.push_back({r.name, r.pass, r.worstResidual, r.tolerance});
        v.worstResidual = std::max(v.worstResidual, r.worstResidual);
    }
    return v;
}

}  // namespace

VerdictRecord runExperiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    VerdictRecord v;
    if (cfg.command == "min-mono") v = runMinMono(cfg);
    else if (cfg.command == "bh-check") v = runBhCheck(cfg);
    else if (cfg.command == "mcf-mono") v = runMcfMono(cfg);
    else if (cfg.command == "entropy") v = runEntropy(cfg);
    else if (cfg.command == "pharm-mono") v = runPharmMono(cfg);
    else if (cfg.command == "heat-mono") v = runHeatMono(cfg);
    else if (cfg.command == "identity-suite") v = runIdentitySuiteCmd(cfg);
    else throw ConfigError("unknown command '" + cfg.command + "'");
    v.wallSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return v;
}

}  // namespace mcm
