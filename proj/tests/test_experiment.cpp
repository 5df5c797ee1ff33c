#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcmono/errors.hpp"
#include "mcmono/experiment.hpp"
#include "mcmono/output.hpp"

using namespace mcm;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("canonical config text round-trips byte-identically") {
    ExperimentConfig cfg;
    cfg.command = "min-mono";
    cfg.surface = "flat-disk";
    cfg.orientNormalToY = true;
    cfg.y = "0.5,0,0";
    cfg.sRange = "1e-3:1:64";
    cfg.quadOrder = 7;
    cfg.tol = 1e-3;
    cfg.outCsv = "ratio.csv";
    const std::string text = cfg.toCanonicalText();
    const ExperimentConfig parsed = ExperimentConfig::fromKeyValueText(text);
    CHECK(parsed.toCanonicalText() == text);
    // idempotent a second time as well
    CHECK(ExperimentConfig::fromKeyValueText(parsed.toCanonicalText()).toCanonicalText() ==
          text);
}

TEST_CASE("config file parsing diagnostics") {
    CHECK_THROWS_WITH_AS(ExperimentConfig::fromKeyValueText("command = x\nbogus = 1\n"),
                         "line 2: unknown key 'bogus'", ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::fromKeyValueText("tilt = abc\n"),
                         "line 1: field 'tilt': cannot parse number 'abc'", ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::fromKeyValueText("no equals sign\n"), ConfigError);
    // comments and blank lines are fine
    const ExperimentConfig cfg = ExperimentConfig::fromKeyValueText(
        "# an experiment\n\ncommand = entropy\n  a = 0.5  \n");
    CHECK(cfg.command == "entropy");
    CHECK(cfg.a == 0.5);
}

TEST_CASE("17-significant-digit formatting") {
    CHECK(formatDouble(0.1) == "0.10000000000000001");
    CHECK(formatDouble(1.0) == "1");
    CHECK(formatDouble(M_PI) == "3.1415926535897931");
}

TEST_CASE("identical configs produce byte-identical CSV artifacts") {
    ExperimentConfig cfg;
    cfg.command = "min-mono";
    cfg.surface = "flat-disk";
    cfg.orientNormalToY = true;
    cfg.y = "0.5,0,0";
    cfg.sRange = "1e-3:1:8";
    cfg.outCsv = "det_a.csv";
    const VerdictRecord v1 = runExperiment(cfg);
    CHECK(v1.pass());
    cfg.outCsv = "det_b.csv";
    runExperiment(cfg);
    const std::string a = slurp("det_a.csv");
    const std::string b = slurp("det_b.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    // header row matches the documented schema, LF endings only
    CHECK(a.rfind("s,ratio,boundary_flux,fd_derivative,bulk_increment,residual\n", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);
    std::remove("det_a.csv");
    std::remove("det_b.csv");
}

TEST_CASE("SVG artifact is written") {
    ExperimentConfig cfg;
    cfg.command = "entropy";
    cfg.shrinker = "circle";
    cfg.y = "1,0";
    cfg.sRange = "0:1.2:8";
    cfg.outSvg = "scan.svg";
    const VerdictRecord v = runExperiment(cfg);
    CHECK(v.pass());
    const std::string svg = slurp("scan.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    std::remove("scan.svg");
}

TEST_CASE("verdict summaries carry per-check lines") {
    ExperimentConfig cfg;
    cfg.command = "identity-suite";
    cfg.seed = 123;
    const VerdictRecord v = runExperiment(cfg);
    CHECK(v.pass());
    const std::string summary = v.summary();
    CHECK(summary.find("ball-nesting") != std::string::npos);
    CHECK(summary.find("coarea-consistency") != std::string::npos);
    CHECK(summary.find("verdict: PASS") != std::string::npos);
}

TEST_CASE("unknown catalog names fail as configuration errors") {
    ExperimentConfig cfg;
    cfg.command = "min-mono";
    cfg.surface = "torus";
    CHECK_THROWS_AS(runExperiment(cfg), ConfigError);
    cfg.command = "no-such-command";
    CHECK_THROWS_AS(runExperiment(cfg), ConfigError);
}

TEST_CASE("fault injection flips the verdict") {
    ExperimentConfig cfg;
    cfg.command = "min-mono";
    cfg.surface = "catenoid";
    cfg.neck = 0.5;
    cfg.y = "on-surface-nearest-origin";
    cfg.sRange = "0.05:1:6";
    cfg.inject = "negate-flux";
    const VerdictRecord v = runExperiment(cfg);
    CHECK_FALSE(v.pass());
}
