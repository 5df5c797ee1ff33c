#include "mcmono/catalog.hpp"

#include <cassert>
#include <cmath>

namespace mcm {

namespace {

RealVec cross3(const RealVec& a, const RealVec& b) {
    return RealVec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                   a[0] * b[1] - a[1] * b[0]};
}

// Orthonormal pair spanning the plane orthogonal to `normal` in R^3.
std::pair<RealVec, RealVec> tangentBasis(const RealVec& normal) {
    const RealVec n = normalized(normal);
    RealVec t = std::abs(n[0]) < 0.9 ? RealVec{1, 0, 0} : RealVec{0, 1, 0};
    RealVec e1 = normalized(t - dot(t, n) * n);
    RealVec e2 = cross3(n, e1);
    return {e1, e2};
}

class AffinePatch final : public ParametricPatch {
public:
    AffinePatch(RealVec point, std::vector<RealVec> basis, Box box, std::string label)
        : p_(std::move(point)), box_(std::move(box)), label_(std::move(label)) {
        // Gram-Schmidt.
        for (auto& b : basis) {
            for (const auto& e : basis_) b -= dot(b, e) * e;
            assert(b.norm() > 1e-12);
            basis_.push_back(normalized(b));
        }
        jac_ = SmallMat(static_cast<int>(basis_.size()), p_.dim());
        for (int i = 0; i < jac_.rows(); ++i) jac_.setRow(i, basis_[i]);
    }

    int paramDim() const override { return jac_.rows(); }
    int ambientDim() const override { return p_.dim(); }
    Box domain() const override { return box_; }
    RealVec embed(const RealVec& u) const override {
        RealVec x = p_;
        for (int i = 0; i < jac_.rows(); ++i) x += u[i] * basis_[i];
        return x;
    }
    SmallMat jacobian(const RealVec&) const override { return jac_; }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec&) const override { return RealVec::zero(p_.dim()); }
    std::string label() const override { return label_; }

private:
    RealVec p_;
    std::vector<RealVec> basis_;
    SmallMat jac_;
    Box box_;
    std::string label_;
};

class CatenoidPatch final : public ParametricPatch {
public:
    CatenoidPatch(double neck, double vHalf) : a_(neck), vHalf_(vHalf) {}

    int paramDim() const override { return 2; }
    int ambientDim() const override { return 3; }
    Box domain() const override { return Box{RealVec{0.0, -vHalf_}, RealVec{2.0 * M_PI, vHalf_}}; }
    RealVec embed(const RealVec& u) const override {
        const double r = a_ * std::cosh(u[1] / a_);
        return RealVec{r * std::cos(u[0]), r * std::sin(u[0]), u[1]};
    }
    SmallMat jacobian(const RealVec& u) const override {
        const double ch = std::cosh(u[1] / a_), sh = std::sinh(u[1] / a_);
        const double c = std::cos(u[0]), s = std::sin(u[0]);
        SmallMat j(2, 3);
        j.setRow(0, RealVec{-a_ * ch * s, a_ * ch * c, 0.0});
        j.setRow(1, RealVec{sh * c, sh * s, 1.0});
        return j;
    }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec&) const override { return RealVec::zero(3); }
    std::string label() const override { return "catenoid"; }

private:
    double a_, vHalf_;
};

class CatenoidLinePatch final : public ParametricPatch {
public:
    CatenoidLinePatch(double neck, double vHalf, double wHalf)
        : a_(neck), vHalf_(vHalf), wHalf_(wHalf) {}

    int paramDim() const override { return 3; }
    int ambientDim() const override { return 4; }
    Box domain() const override {
        return Box{RealVec{0.0, -vHalf_, -wHalf_}, RealVec{2.0 * M_PI, vHalf_, wHalf_}};
    }
    RealVec embed(const RealVec& u) const override {
        const double r = a_ * std::cosh(u[1] / a_);
        return RealVec{r * std::cos(u[0]), r * std::sin(u[0]), u[1], u[2]};
    }
    SmallMat jacobian(const RealVec& u) const override {
        const double ch = std::cosh(u[1] / a_), sh = std::sinh(u[1] / a_);
        const double c = std::cos(u[0]), s = std::sin(u[0]);
        SmallMat j(3, 4);
        j.setRow(0, RealVec{-a_ * ch * s, a_ * ch * c, 0.0, 0.0});
        j.setRow(1, RealVec{sh * c, sh * s, 1.0, 0.0});
        j.setRow(2, RealVec{0.0, 0.0, 0.0, 1.0});
        return j;
    }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec&) const override { return RealVec::zero(4); }
    std::string label() const override { return "catenoid-line"; }

private:
    double a_, vHalf_, wHalf_;
};

class HelicoidPatch final : public ParametricPatch {
public:
    HelicoidPatch(double pitch, double uHalf, double vHalf)
        : c_(pitch), uHalf_(uHalf), vHalf_(vHalf) {}

    int paramDim() const override { return 2; }
    int ambientDim() const override { return 3; }
    Box domain() const override {
        return Box{RealVec{-uHalf_, -vHalf_}, RealVec{uHalf_, vHalf_}};
    }
    RealVec embed(const RealVec& u) const override {
        return RealVec{u[1] * std::cos(u[0]), u[1] * std::sin(u[0]), c_ * u[0]};
    }
    SmallMat jacobian(const RealVec& u) const override {
        const double c = std::cos(u[0]), s = std::sin(u[0]);
        SmallMat j(2, 3);
        j.setRow(0, RealVec{-u[1] * s, u[1] * c, c_});
        j.setRow(1, RealVec{c, s, 0.0});
        return j;
    }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec&) const override { return RealVec::zero(3); }
    std::string label() const override { return "helicoid"; }

private:
    double c_, uHalf_, vHalf_;
};

class SpherePolarPatch final : public ParametricPatch {
public:
    SpherePolarPatch(RealVec centre, double radius, double theta0, double theta1)
        : c_(std::move(centre)), r_(radius), th0_(theta0), th1_(theta1) {}

    int paramDim() const override { return 2; }
    int ambientDim() const override { return 3; }
    Box domain() const override {
        return Box{RealVec{th0_, 0.0}, RealVec{th1_, 2.0 * M_PI}};
    }
    RealVec embed(const RealVec& u) const override {
        const double st = std::sin(u[0]), ct = std::cos(u[0]);
        return c_ + r_ * RealVec{st * std::cos(u[1]), st * std::sin(u[1]), ct};
    }
    SmallMat jacobian(const RealVec& u) const override {
        const double st = std::sin(u[0]), ct = std::cos(u[0]);
        const double cp = std::cos(u[1]), sp = std::sin(u[1]);
        SmallMat j(2, 3);
        j.setRow(0, r_ * RealVec{ct * cp, ct * sp, -st});
        j.setRow(1, r_ * RealVec{-st * sp, st * cp, 0.0});
        return j;
    }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec& u) const override {
        return (2.0 / (r_ * r_)) * (c_ - embed(u));
    }
    std::string label() const override { return "sphere"; }

private:
    RealVec c_;
    double r_, th0_, th1_;
};

class SphereGraphPatch final : public ParametricPatch {
public:
    SphereGraphPatch(RealVec centre, double radius, Box box)
        : c_(std::move(centre)), r_(radius), box_(std::move(box)) {}

    int paramDim() const override { return 2; }
    int ambientDim() const override { return 3; }
    Box domain() const override { return box_; }
    RealVec embed(const RealVec& u) const override {
        return RealVec{u[0], u[1], c_[2] + height(u)};
    }
    SmallMat jacobian(const RealVec& u) const override {
        const double w = height(u);
        SmallMat j(2, 3);
        j.setRow(0, RealVec{1.0, 0.0, -(u[0] - c_[0]) / w});
        j.setRow(1, RealVec{0.0, 1.0, -(u[1] - c_[1]) / w});
        return j;
    }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec& u) const override {
        return (2.0 / (r_ * r_)) * (c_ - embed(u));
    }
    std::string label() const override { return "sphere-cap"; }

private:
    double height(const RealVec& u) const {
        const double rho2 = (u[0] - c_[0]) * (u[0] - c_[0]) + (u[1] - c_[1]) * (u[1] - c_[1]);
        assert(rho2 < r_ * r_);
        return std::sqrt(r_ * r_ - rho2);
    }
    RealVec c_;
    double r_;
    Box box_;
};

class CirclePatch final : public ParametricPatch {
public:
    CirclePatch(RealVec centre, double radius) : c_(std::move(centre)), r_(radius) {}

    int paramDim() const override { return 1; }
    int ambientDim() const override { return 2; }
    Box domain() const override { return Box{RealVec{0.0}, RealVec{2.0 * M_PI}}; }
    RealVec embed(const RealVec& u) const override {
        return c_ + r_ * RealVec{std::cos(u[0]), std::sin(u[0])};
    }
    SmallMat jacobian(const RealVec& u) const override {
        SmallMat j(1, 2);
        j.setRow(0, r_ * RealVec{-std::sin(u[0]), std::cos(u[0])});
        return j;
    }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec& u) const override {
        return (1.0 / (r_ * r_)) * (c_ - embed(u));
    }
    std::string label() const override { return "circle"; }

private:
    RealVec c_;
    double r_;
};

class CylinderPatch final : public ParametricPatch {
public:
    CylinderPatch(double radius, double zHalf) : r_(radius), zHalf_(zHalf) {}

    int paramDim() const override { return 2; }
    int ambientDim() const override { return 3; }
    Box domain() const override {
        return Box{RealVec{0.0, -zHalf_}, RealVec{2.0 * M_PI, zHalf_}};
    }
    RealVec embed(const RealVec& u) const override {
        return RealVec{r_ * std::cos(u[0]), r_ * std::sin(u[0]), u[1]};
    }
    SmallMat jacobian(const RealVec& u) const override {
        SmallMat j(2, 3);
        j.setRow(0, RealVec{-r_ * std::sin(u[0]), r_ * std::cos(u[0]), 0.0});
        j.setRow(1, RealVec{0.0, 0.0, 1.0});
        return j;
    }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec& u) const override {
        const RealVec x = embed(u);
        return (-1.0 / (r_ * r_)) * RealVec{x[0], x[1], 0.0};
    }
    std::string label() const override { return "cylinder"; }

private:
    double r_, zHalf_;
};

class BoxPatch final : public ParametricPatch {
public:
    BoxPatch(Box box, std::string label) : box_(std::move(box)), label_(std::move(label)) {
        jac_ = SmallMat(box_.dim(), box_.dim());
        for (int i = 0; i < box_.dim(); ++i) jac_(i, i) = 1.0;
    }

    int paramDim() const override { return box_.dim(); }
    int ambientDim() const override { return box_.dim(); }
    Box domain() const override { return box_; }
    RealVec embed(const RealVec& u) const override { return u; }
    SmallMat jacobian(const RealVec&) const override { return jac_; }
    bool hasMeanCurvature() const override { return true; }
    RealVec meanCurvature(const RealVec&) const override { return RealVec::zero(box_.dim()); }
    std::string label() const override { return label_; }

private:
    Box box_;
    SmallMat jac_;
    std::string label_;
};

}  // namespace

PatchPtr makeAffinePatch(const RealVec& point, const std::vector<RealVec>& basis,
                         const Box& box, const std::string& label) {
    return std::make_shared<AffinePatch>(point, basis, box, label);
}

PatchPtr makePlanePatch(const RealVec& point, const RealVec& normal, double halfExtent,
                        const std::string& label) {
    auto [e1, e2] = tangentBasis(normal);
    Box box{RealVec{-halfExtent, -halfExtent}, RealVec{halfExtent, halfExtent}};
    return makeAffinePatch(point, {e1, e2}, box, label);
}

PatchPtr makeCatenoidPatch(double neck, double vHalf) {
    return std::make_shared<CatenoidPatch>(neck, vHalf);
}

PatchPtr makeCatenoidLinePatch(double neck, double vHalf, double wHalf) {
    return std::make_shared<CatenoidLinePatch>(neck, vHalf, wHalf);
}

PatchPtr makeHelicoidPatch(double pitch, double uHalf, double vHalf) {
    return std::make_shared<HelicoidPatch>(pitch, uHalf, vHalf);
}

PatchPtr makeSpherePolarPatch(const RealVec& centre, double radius, double theta0,
                              double theta1) {
    return std::make_shared<SpherePolarPatch>(centre, radius, theta0, theta1);
}

PatchPtr makeSphereGraphPatch(const RealVec& centre, double radius, const Box& box) {
    return std::make_shared<SphereGraphPatch>(centre, radius, box);
}

PatchPtr makeCirclePatch(const RealVec& centre, double radius) {
    return std::make_shared<CirclePatch>(centre, radius);
}

PatchPtr makeCylinderPatch(double radius, double zHalf) {
    return std::make_shared<CylinderPatch>(radius, zHalf);
}

PatchPtr makeBoxPatch(const Box& box, const std::string& label) {
    return std::make_shared<BoxPatch>(box, label);
}

Surface singleChartSurface(PatchPtr patch, bool minimal, double hBound,
                           const std::string& label) {
    Surface s;
    s.k = patch->paramDim();
    s.n = patch->ambientDim();
    s.minimal = minimal;
    s.meanCurvatureBound = hBound;
    s.label = label;
    s.charts.push_back(std::move(patch));
    return s;
}

Surface catalogFlatDisk(const RealVec& y, bool throughY, double tiltDegrees) {
    const double yn = y.norm();
    RealVec normal = yn > 0 ? normalized(y) : RealVec{0, 0, 1};
    if (tiltDegrees != 0.0) {
        auto [e1, e2] = tangentBasis(normal);
        (void)e2;
        const double t = tiltDegrees * M_PI / 180.0;
        normal = std::cos(t) * normal + std::sin(t) * e1;
    }
    const RealVec point = throughY ? y : RealVec::zero(y.dim());
    return singleChartSurface(makePlanePatch(point, normal, 1.5, "flat-disk"), true, 0.0,
                              "flat-disk");
}

Surface catalogTiltedPlane(const RealVec& y, double tiltDegrees) {
    const double yn = y.norm();
    RealVec axis = yn > 0 ? normalized(y) : RealVec{1, 0, 0};
    auto [e1, e2] = tangentBasis(axis);
    (void)e2;
    const double t = tiltDegrees * M_PI / 180.0;
    const RealVec normal = std::cos(t) * axis + std::sin(t) * e1;
    return singleChartSurface(makePlanePatch(RealVec::zero(y.dim()), normal, 1.25, "tilted-plane"),
                              true, 0.0, "tilted-plane");
}

Surface catalogCatenoid(double neck) {
    assert(neck > 0 && neck < 1.3);
    const double vHalf = neck * std::acosh(1.35 / neck);
    return singleChartSurface(makeCatenoidPatch(neck, vHalf), true, 0.0, "catenoid");
}

Surface catalogHelicoid(double pitch) {
    return singleChartSurface(makeHelicoidPatch(pitch, 1.35 / pitch, 1.35), true, 0.0,
                              "helicoid");
}

Surface catalogSphereCap(const RealVec& y) {
    // Radius-2 sphere through y, centred two units below it; |H| = 1.
    const RealVec centre = y - RealVec{0, 0, 2.0};
    Box box{RealVec{y[0] - 1.35, y[1] - 1.35}, RealVec{y[0] + 1.35, y[1] + 1.35}};
    return singleChartSurface(makeSphereGraphPatch(centre, 2.0, box), false, 1.0, "sphere-cap");
}

Surface catalogPlanePair(const RealVec& y) {
    assert(y.norm() > 0);
    const RealVec n1 = normalized(y);
    auto [e1, e2] = tangentBasis(n1);
    (void)e2;
    const double t = 50.0 * M_PI / 180.0;
    const RealVec n2 = std::cos(t) * n1 + std::sin(t) * e1;
    Surface s;
    s.k = 2;
    s.n = y.dim();
    s.minimal = true;
    s.meanCurvatureBound = 0.0;
    s.label = "plane-pair";
    s.charts.push_back(makePlanePatch(y, n1, 1.35, "plane-pair-a"));
    s.charts.push_back(makePlanePatch(y, n2, 1.35, "plane-pair-b"));
    return s;
}

}  // namespace mcm
