#include "mcmono/patch.hpp"

#include <cmath>

namespace mcm {

bool solveSymmetric(const SmallMat& g, const RealVec& b, RealVec& w, double detFloor) {
    const int k = g.rows();
    const double d = det(g);
    if (std::abs(d) <= detFloor) return false;
    w = RealVec(k);
    switch (k) {
        case 1:
            w[0] = b[0] / d;
            return true;
        case 2:
            w[0] = (b[0] * g(1, 1) - b[1] * g(0, 1)) / d;
            w[1] = (g(0, 0) * b[1] - g(1, 0) * b[0]) / d;
            return true;
        case 3: {
            auto det3 = [](double a00, double a01, double a02, double a10, double a11,
                           double a12, double a20, double a21, double a22) {
                return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
                       a02 * (a10 * a21 - a11 * a20);
            };
            w[0] = det3(b[0], g(0, 1), g(0, 2), b[1], g(1, 1), g(1, 2), b[2], g(2, 1), g(2, 2)) / d;
            w[1] = det3(g(0, 0), b[0], g(0, 2), g(1, 0), b[1], g(1, 2), g(2, 0), b[2], g(2, 2)) / d;
            w[2] = det3(g(0, 0), g(0, 1), b[0], g(1, 0), g(1, 1), b[1], g(2, 0), g(2, 1), b[2]) / d;
            return true;
        }
        default:
            return false;
    }
}

double areaElement(const SmallMat& jac) {
    const double d = det(gramMatrix(jac));
    if (d <= kGramDetFloor) throw SingularChartError("Gram determinant at or below floor");
    return std::sqrt(d);
}

RealVec tangentialPart(const SmallMat& jac, const RealVec& v) {
    const SmallMat g = gramMatrix(jac);
    const RealVec b = jac.apply(v);  // <row_i, v>
    RealVec w;
    if (!solveSymmetric(g, b, w, kGramDetFloor))
        throw SingularChartError("Gram determinant at or below floor in projection");
    return jac.applyTransposed(w);
}

RealVec tangentialPart(const ParametricPatch& patch, const RealVec& u, const RealVec& v) {
    return tangentialPart(patch.jacobian(u), v);
}

RealVec normalPart(const ParametricPatch& patch, const RealVec& u, const RealVec& v) {
    return v - tangentialPart(patch.jacobian(u), v);
}

double surfaceDivergenceFD(const ParametricPatch& patch, const RealVec& u,
                           const std::function<RealVec(const RealVec&)>& field) {
    const int k = patch.paramDim();
    const SmallMat jac = patch.jacobian(u);
    const SmallMat g = gramMatrix(jac);

    auto divWithStep = [&](double scale) {
        double divergence = 0.0;
        SmallMat dW(k, patch.ambientDim());
        for (int i = 0; i < k; ++i) {
            const double h = scale * (1.0 + std::abs(u[i]));
            RealVec up = u, um = u;
            up[i] += h;
            um[i] -= h;
            dW.setRow(i, (1.0 / (2.0 * h)) * (field(patch.embed(up)) - field(patch.embed(um))));
        }
        // sum_ij G^ij <dW_i, row_j>
        for (int i = 0; i < k; ++i) {
            RealVec b = jac.apply(dW.row(i));  // <row_j, dW_i>
            RealVec w;
            if (!solveSymmetric(g, RealVec::unit(k, i), w, kGramDetFloor))
                throw SingularChartError("Gram determinant at or below floor in divergence");
            divergence += dot(w, b);
        }
        return divergence;
    };

    // Richardson: central differences at h and h/2, fourth-order combination.
    const double dh = divWithStep(1e-5);
    const double dh2 = divWithStep(5e-6);
    return (4.0 * dh2 - dh) / 3.0;
}

}  // namespace mcm
