#pragma once

#include <vector>

namespace mcm {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rule with `order` nodes, 1 <= order <= 32. Exact for polynomials
// of degree 2*order - 1.
const GaussRule& gaussRule(int order);

// Tanh-sinh rule on [-1, 1]: 33 nodes, |t| <= 3.5. Exponential node
// clustering at the endpoints absorbs integrable endpoint singularities;
// the every-other-node subset doubles as an embedded coarse rule (its
// weights are twice the fine ones).
struct TanhSinhRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const TanhSinhRule& tanhSinhRule();

// Gauss-Hermite rule for weight exp(-z^2) on the real line, 1 <= order <= 32.
const GaussRule& hermiteRule(int order);

}  // namespace mcm
