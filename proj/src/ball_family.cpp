#include "mcmono/ball_family.hpp"

#include <cmath>
#include <limits>

#include "mcmono/errors.hpp"

namespace mcm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MinimalBallFamily::MinimalBallFamily(RealVec y) : y_(std::move(y)), ySq_(y_.normSq()) {
    if (!y_.isFinite() || ySq_ >= 1.0)
        throw DomainError("moving-centre parameter must satisfy |y| < 1");
}

double MinimalBallFamily::radiusSq(double s) const {
    if (s <= 0.0) throw DomainError("scale must be positive");
    return s * (1.0 - ySq_) + s * s * ySq_;
}

double MinimalBallFamily::radius(double s) const { return std::sqrt(radiusSq(s)); }

RealVec MinimalBallFamily::centre(double s) const {
    if (s <= 0.0) throw DomainError("scale must be positive");
    return (1.0 - s) * y_;
}

std::pair<RealVec, double> MinimalBallFamily::centreAndRadius(double s) const {
    return {centre(s), radius(s)};
}

double MinimalBallFamily::levelFunction(const RealVec& x) const {
    const double denom = 1.0 - 2.0 * dot(x, y_) + ySq_;
    if (denom <= 0.0)
        throw OutsideFoliationError("point outside the foliated half-space");
    const double f = distSq(x, y_) / denom;
    if (selfCheck && definingResidual(x) > 1e-12 * (1.0 + x.normSq()))
        throw Error("defining identity residual above 1e-12 in levelFunction");
    return f;
}

double MinimalBallFamily::levelFunctionOrInf(const RealVec& x) const noexcept {
    const double denom = 1.0 - 2.0 * dot(x, y_) + ySq_;
    if (denom <= 0.0) return kInf;
    return distSq(x, y_) / denom;
}

double MinimalBallFamily::levelFunctionAlt(const RealVec& x) const {
    const double d2 = distSq(x, y_);
    const double denom = 1.0 - x.normSq() + d2;
    if (denom <= 0.0)
        throw OutsideFoliationError("point outside the foliated half-space");
    return d2 / denom;
}

RealVec MinimalBallFamily::levelGradient(const RealVec& x) const {
    const double f = levelFunction(x);
    if (f <= 0.0)
        throw GradientUndefinedError("level gradient undefined at the family vertex");
    return (2.0 * f / distSq(x, y_)) * (x - y_ + f * y_);
}

ScalarField MinimalBallFamily::asField() const {
    MinimalBallFamily fam = *this;
    fam.selfCheck = false;
    return ScalarField{
        [fam](const RealVec& x) { return fam.levelFunctionOrInf(x); },
        [fam](const RealVec& x) { return fam.levelGradient(x); },
    };
}

double MinimalBallFamily::definingResidual(const RealVec& x) const {
    const double denom = 1.0 - 2.0 * dot(x, y_) + ySq_;
    if (denom <= 0.0) return kInf;
    const double f = distSq(x, y_) / denom;
    const double lhs = distSq(x, (1.0 - f) * y_);
    const double rho = f * (1.0 - ySq_) + f * f * ySq_;
    return std::abs(lhs - rho);
}

QBallFamily::QBallFamily(RealVec y, double q) : y_(std::move(y)), q_(q), ySq_(y_.normSq()) {
    if (q_ < 1.0) throw DomainError("q must be at least 1");
    if (!y_.isFinite() || q_ * ySq_ >= 1.0)
        throw DomainError("moving-centre parameter must satisfy q|y|^2 < 1");
}

double QBallFamily::radiusSq(double s) const {
    if (s <= 0.0) throw DomainError("scale must be positive");
    return s * (1.0 - q_ * ySq_) + s * s * q_ * ySq_;
}

double QBallFamily::radius(double s) const { return std::sqrt(radiusSq(s)); }

RealVec QBallFamily::centre(double s) const {
    if (s <= 0.0) throw DomainError("scale must be positive");
    return s * y_;
}

std::pair<RealVec, double> QBallFamily::centreAndRadius(double s) const {
    return {centre(s), radius(s)};
}

double QBallFamily::levelFunction(const RealVec& x) const {
    const double a = (q_ - 1.0) * ySq_;
    const double b = 1.0 - q_ * ySq_ + 2.0 * dot(x, y_);
    const double x2 = x.normSq();
    double f;
    if (b >= 0.0) {
        const double disc = std::sqrt(b * b + 4.0 * a * x2);
        // Rationalized positive root; exact q = 1 closed form when a = 0.
        f = (b + disc > 0.0) ? 2.0 * x2 / (b + disc) : 0.0;
    } else {
        if (a <= 0.0)
            throw OutsideFoliationError("point outside the foliated half-space (q = 1)");
        f = (-b + std::sqrt(b * b + 4.0 * a * x2)) / (2.0 * a);
    }
    if (selfCheck && definingResidual(x) > 1e-12 * (1.0 + x.normSq()))
        throw Error("defining identity residual above 1e-12 in levelFunction");
    return f;
}

double QBallFamily::levelFunctionOrInf(const RealVec& x) const noexcept {
    const double a = (q_ - 1.0) * ySq_;
    const double b = 1.0 - q_ * ySq_ + 2.0 * dot(x, y_);
    const double x2 = x.normSq();
    if (b >= 0.0) {
        const double disc = std::sqrt(b * b + 4.0 * a * x2);
        return (b + disc > 0.0) ? 2.0 * x2 / (b + disc) : 0.0;
    }
    if (a <= 0.0) return kInf;
    return (-b + std::sqrt(b * b + 4.0 * a * x2)) / (2.0 * a);
}

RealVec QBallFamily::levelGradient(const RealVec& x) const {
    const double f = levelFunction(x);
    if (f <= 0.0)
        throw GradientUndefinedError("level gradient undefined at the family vertex");
    const double denom = x.normSq() + (q_ - 1.0) * f * f * ySq_;
    return (2.0 * f / denom) * (x - f * y_);
}

double QBallFamily::levelGradientNorm(const RealVec& x) const {
    const double f = levelFunction(x);
    if (f <= 0.0)
        throw GradientUndefinedError("level gradient undefined at the family vertex");
    const double denom = x.normSq() + (q_ - 1.0) * f * f * ySq_;
    return 2.0 * f * radius(f) / denom;
}

ScalarField QBallFamily::asField() const {
    QBallFamily fam = *this;
    fam.selfCheck = false;
    return ScalarField{
        [fam](const RealVec& x) { return fam.levelFunctionOrInf(x); },
        [fam](const RealVec& x) { return fam.levelGradient(x); },
    };
}

double QBallFamily::definingResidual(const RealVec& x) const {
    const double f = levelFunctionOrInf(x);
    if (!std::isfinite(f)) return kInf;
    if (f <= 0.0) return x.normSq();
    const double lhs = distSq(x, f * y_);
    const double rhs = f * (1.0 - q_ * ySq_) + f * f * q_ * ySq_;
    return std::abs(lhs - rhs);
}

}  // namespace mcm
