#include "mcmono/gauss.hpp"

#include <array>
#include <cassert>
#include <cmath>

namespace mcm {

namespace {

GaussRule buildRule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on the Legendre polynomial, standard initial guesses.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            p1 = dp;  // keep derivative for the weight
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * p1 * p1);
    }
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    return rule;
}

}  // namespace

const TanhSinhRule& tanhSinhRule() {
    static const TanhSinhRule rule = [] {
        TanhSinhRule r;
        const int nHalf = 16;
        const double tMax = 3.5;
        const double h = tMax / nHalf;
        for (int k = -nHalf; k <= nHalf; ++k) {
            const double t = k * h;
            const double sh = 0.5 * M_PI * std::sinh(t);
            r.nodes.push_back(std::tanh(sh));
            r.weights.push_back(h * 0.5 * M_PI * std::cosh(t) /
                                (std::cosh(sh) * std::cosh(sh)));
        }
        return r;
    }();
    return rule;
}

const GaussRule& gaussRule(int order) {
    assert(order >= 1 && order <= 32);
    static const std::array<GaussRule, 33> rules = [] {
        std::array<GaussRule, 33> r;
        for (int n = 1; n <= 32; ++n) r[n] = buildRule(n);
        return r;
    }();
    return rules[order];
}

const GaussRule& hermiteRule(int order) {
    assert(order >= 2 && order <= 32);
    static const std::array<GaussRule, 33> rules = [] {
        std::array<GaussRule, 33> all;
        for (int n = 2; n <= 32; ++n) {
            GaussRule rule;
            rule.nodes.resize(n);
            rule.weights.resize(n);
            // Orthonormal-recurrence Newton iteration with the classical
            // initial guesses, weights as Christoffel numbers.
            double z = 0.0;
            for (int i = 0; i < (n + 1) / 2; ++i) {
                if (i == 0)
                    z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
                else if (i == 1)
                    z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
                else if (i == 2)
                    z = 1.86 * z - 0.86 * rule.nodes[0];
                else if (i == 3)
                    z = 1.91 * z - 0.91 * rule.nodes[1];
                else
                    z = 2.0 * z - rule.nodes[i - 2];
                double pp = 0.0, sumSq = 0.0;
                for (int it = 0; it < 100; ++it) {
                    double p1 = std::pow(M_PI, -0.25);
                    double p2 = 0.0;
                    sumSq = p1 * p1;
                    for (int k = 0; k < n; ++k) {
                        const double p3 = p2;
                        p2 = p1;
                        p1 = z * std::sqrt(2.0 / (k + 1.0)) * p2 -
                             std::sqrt(static_cast<double>(k) / (k + 1.0)) * p3;
                        if (k + 1 < n) sumSq += p1 * p1;
                    }
                    pp = std::sqrt(2.0 * n) * p2;
                    const double dz = p1 / pp;
                    z -= dz;
                    if (std::abs(dz) < 1e-15) break;
                }
                rule.nodes[i] = z;
                rule.nodes[n - 1 - i] = -z;
                const double w = 1.0 / sumSq;
                rule.weights[i] = w;
                rule.weights[n - 1 - i] = w;
            }
            all[n] = rule;
        }
        return all;
    }();
    return rules[order];
}

}  // namespace mcm
