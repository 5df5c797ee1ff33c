// Command-line front end: catalog selection, experiment execution, CSV and
// SVG emission, machine-readable verdicts.
//
// Exit codes: 0 pass, 2 mathematical-verdict failure, 3 configuration
// error, 4 quadrature tolerance unmet.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "mcmono/errors.hpp"
#include "mcmono/experiment.hpp"

namespace {

void printUsage() {
    std::cout <<
        "Usage: mcmono <command> [options]\n"
        "\n"
        "Commands:\n"
        "  min-mono        area-ratio monotonicity sweep on a minimal catalog surface\n"
        "  bh-check        sharp area bound (ratio vs. density-weighted flat bound)\n"
        "  mcf-mono        moving-centre Gaussian density sweep along a mean curvature flow\n"
        "  entropy         Gaussian-area scan along a self-shrinker\n"
        "  pharm-mono      weighted p-energy sweep for stationary p-harmonic maps\n"
        "  heat-mono       Gaussian-weighted energy sweep for the harmonic map heat flow\n"
        "  identity-suite  seeded randomized invariant checks\n"
        "\n"
        "Common options (flag names match config-file keys, '-' for '_'):\n"
        "  --config FILE           load a key = value config file (flags override)\n"
        "  --dump-config           print the canonical config text and exit\n"
        "  --surface NAME          flat-disk | tilted-plane | catenoid | helicoid |\n"
        "                          sphere-cap | plane-pair\n"
        "  --flow NAME             plane | sphere | cylinder | circle (mcf-mono)\n"
        "                          zero | linear | kernel (heat-mono)\n"
        "  --shrinker NAME         circle | plane | sphere | cylinder\n"
        "  --map NAME              constant | linear | radial\n"
        "  --path NAME             constant | line | curved | parabolic\n"
        "  --y A,B,C               moving-centre parameter (or on-surface-nearest-origin)\n"
        "  --y0 A,B,C              path direction/velocity (or 'normal' for the plane)\n"
        "  --orient-normal-to-y    pose the flat disk through y, orthogonal to y\n"
        "  --tilt DEG --neck R --pitch C --q Q --c-h C --t0 T --a A\n"
        "  --s LO:HI:N             geometric scale grid    --t LO:HI:N  uniform time grid\n"
        "  --quad-cells N --quad-order K --quad-depth D --tol X --seed S\n"
        "  --out-csv PATH --out-svg PATH\n";
}

bool isBooleanKey(const std::string& key) { return key == "orient_normal_to_y"; }

std::string flagToKey(const std::string& flag) {
    std::string key = flag.substr(2);
    for (char& c : key)
        if (c == '-') c = '_';
    return key;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        printUsage();
        return 3;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        printUsage();
        return 0;
    }

    mcm::ExperimentConfig cfg;
    bool dumpConfig = false;
    try {
        cfg.command = command;
        for (int i = 2; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--help" || arg == "-h") {
                printUsage();
                return 0;
            }
            if (arg == "--dump-config") {
                dumpConfig = true;
                continue;
            }
            if (arg.rfind("--", 0) != 0)
                throw mcm::ConfigError("unexpected argument '" + arg + "'");
            const std::string key = flagToKey(arg);
            if (arg == "--config") {
                if (i + 1 >= argc) throw mcm::ConfigError("--config needs a file path");
                std::ifstream in(argv[++i]);
                if (!in) throw mcm::ConfigError(std::string("cannot read config file '") +
                                                argv[i] + "'");
                std::stringstream ss;
                ss << in.rdbuf();
                mcm::ExperimentConfig fileCfg = mcm::ExperimentConfig::fromKeyValueText(ss.str());
                fileCfg.command = cfg.command;
                cfg = fileCfg;  // flags that follow still override
                continue;
            }
            if (isBooleanKey(key)) {
                cfg.set(key, "true");
                continue;
            }
            if (i + 1 >= argc) throw mcm::ConfigError("flag '" + arg + "' needs a value");
            cfg.set(key, argv[++i]);
        }

        if (dumpConfig) {
            std::cout << cfg.toCanonicalText();
            return 0;
        }

        const mcm::VerdictRecord verdict = mcm::runExperiment(cfg);
        std::cout << verdict.summary();
        return verdict.pass() ? 0 : 2;
    } catch (const mcm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const mcm::ToleranceNotMetError& e) {
        std::cerr << "quadrature tolerance unmet: " << e.what()
                  << " (achieved " << e.achieved << ")\n";
        return 4;
    } catch (const mcm::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
