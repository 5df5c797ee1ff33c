#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcm {

// Experiment configuration. Flags and the plain key-value config file (one
// `key = value` per line, `#` comments) populate the same fields; the
// canonical text form is idempotent under parse/serialize.
struct ExperimentConfig {
    std::string command;  // min-mono | bh-check | mcf-mono | entropy |
                          // pharm-mono | heat-mono | identity-suite
    std::optional<std::string> surface;
    std::optional<std::string> flow;
    std::optional<std::string> shrinker;
    std::optional<std::string> map;
    std::optional<std::string> path;
    std::optional<std::string> y;       // "a,b,c" or "on-surface-nearest-origin"
    std::optional<std::string> y0;      // "a,b,c" or "normal"
    std::optional<bool> orientNormalToY;
    std::optional<double> tilt;         // degrees
    std::optional<double> neck;
    std::optional<double> pitch;
    std::optional<double> q;
    std::optional<double> cH;
    std::optional<double> t0;
    std::optional<double> a;
    std::optional<std::string> sRange;  // "lo:hi:count", geometric
    std::optional<std::string> tRange;  // "lo:hi:count", uniform
    std::optional<int> quadCells;
    std::optional<int> quadOrder;
    std::optional<int> quadDepth;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> outCsv;
    std::optional<std::string> outSvg;
    std::optional<std::string> inject;  // fault injection hook for tests

    // Throws ConfigError naming the offending key or value.
    void set(const std::string& key, const std::string& value);
    static ExperimentConfig fromKeyValueText(const std::string& text);
    std::string toCanonicalText() const;
};

struct VerdictCheck {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double tolerance = 0.0;
};

struct VerdictRecord {
    std::string id;
    std::vector<VerdictCheck> checks;
    double worstResidual = 0.0;
    double quadBound = 0.0;
    double wallSeconds = 0.0;
    bool pass() const;
    std::string summary() const;  // one line per check plus the verdict
};

// Runs the experiment, writes the CSV/SVG artifacts when requested, and
// returns the verdict. Throws ConfigError (exit 3 at the CLI),
// ToleranceNotMetError (exit 4), or DomainError (exit 3).
VerdictRecord runExperiment(const ExperimentConfig& config);

}  // namespace mcm
