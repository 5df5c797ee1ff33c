#pragma once

#include "mcmono/quadrature.hpp"
#include "mcmono/realvec.hpp"

namespace mcm {

// Nested family of balls E_s = B((1-s)y, r(s)) with
// r(s)^2 = s(1 - |y|^2) + s^2 |y|^2, so E_1 is the unit ball for every
// admissible y. The sub-level function f satisfies E_s = {f < s} and the
// defining identity |x - (1-f)y|^2 = r(f)^2.
class MinimalBallFamily {
public:
    explicit MinimalBallFamily(RealVec y);

    const RealVec& y() const { return y_; }
    int ambientDim() const { return y_.dim(); }

    double radiusSq(double s) const;  // r(s)^2
    double radius(double s) const;
    RealVec centre(double s) const;  // (1-s) y
    std::pair<RealVec, double> centreAndRadius(double s) const;

    // f(x) = |x-y|^2 / (1 - 2<x,y> + |y|^2); throws outside the foliated
    // half-space <x,y> < (1+|y|^2)/2.
    double levelFunction(const RealVec& x) const;
    // Same, but +infinity outside the foliation (quadrature indicator use).
    double levelFunctionOrInf(const RealVec& x) const noexcept;
    // Algebraically equal second form |x-y|^2 / (1 - |x|^2 + |x-y|^2),
    // kept as a numerical cross-check.
    double levelFunctionAlt(const RealVec& x) const;

    // Df = 2 f (x - y + f y) / |x-y|^2, defined where f > 0.
    RealVec levelGradient(const RealVec& x) const;

    ScalarField asField() const;

    // Residual of the defining identity at x (should be ~ machine epsilon
    // relative to 1 + |x|^2).
    double definingResidual(const RealVec& x) const;

    // When set, every levelFunction evaluation asserts the defining
    // identity to 1e-12 * (1 + |x|^2).
    bool selfCheck = false;

private:
    RealVec y_;
    double ySq_;
};

// Family E_s^(q) = B(s y, R_q(s)) with R_q(s)^2 = s(1 - q|y|^2) + s^2 q|y|^2,
// for q >= 1 and q|y|^2 < 1. For q = 1 this is the minimal family up to the
// rigid motion x -> y - x.
class QBallFamily {
public:
    QBallFamily(RealVec y, double q);

    const RealVec& y() const { return y_; }
    double q() const { return q_; }
    int domainDim() const { return y_.dim(); }

    double radiusSq(double s) const;  // R_q(s)^2
    double radius(double s) const;
    RealVec centre(double s) const;  // s y
    std::pair<RealVec, double> centreAndRadius(double s) const;

    // Root of (q-1)|y|^2 f^2 + (1 - q|y|^2 + 2<x,y>) f = |x|^2, evaluated in
    // the rationalized form that stays stable as (q-1)|y|^2 -> 0 (where it
    // reduces to the q = 1 closed form).
    double levelFunction(const RealVec& x) const;
    double levelFunctionOrInf(const RealVec& x) const noexcept;

    // grad f = 2 f (x - f y) / (|x|^2 + (q-1) f^2 |y|^2), where f > 0; its
    // norm is 2 f R_q(f) / (|x|^2 + (q-1) f^2 |y|^2).
    RealVec levelGradient(const RealVec& x) const;
    double levelGradientNorm(const RealVec& x) const;

    ScalarField asField() const;

    double definingResidual(const RealVec& x) const;

    bool selfCheck = false;

private:
    RealVec y_;
    double q_;
    double ySq_;
};

}  // namespace mcm
