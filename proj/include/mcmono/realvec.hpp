#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

namespace mcm {

// Fixed-capacity real vector. Ambient and parameter dimensions in this
// library never exceed 4, so inline storage avoids allocation in the
// quadrature inner loops.
class RealVec {
public:
    static constexpr int kMaxDim = 4;

    RealVec() = default;
    explicit RealVec(int dim) : n_(dim) {
        assert(dim >= 0 && dim <= kMaxDim);
        e_.fill(0.0);
    }
    RealVec(std::initializer_list<double> vals) : n_(static_cast<int>(vals.size())) {
        assert(n_ <= kMaxDim);
        int i = 0;
        for (double v : vals) e_[i++] = v;
        for (; i < kMaxDim; ++i) e_[i] = 0.0;
    }

    static RealVec zero(int dim) { return RealVec(dim); }
    static RealVec unit(int dim, int axis) {
        RealVec v(dim);
        v[axis] = 1.0;
        return v;
    }

    int dim() const { return n_; }
    double operator[](int i) const { return e_[i]; }
    double& operator[](int i) { return e_[i]; }

    RealVec& operator+=(const RealVec& o) {
        for (int i = 0; i < n_; ++i) e_[i] += o.e_[i];
        return *this;
    }
    RealVec& operator-=(const RealVec& o) {
        for (int i = 0; i < n_; ++i) e_[i] -= o.e_[i];
        return *this;
    }
    RealVec& operator*=(double c) {
        for (int i = 0; i < n_; ++i) e_[i] *= c;
        return *this;
    }

    friend RealVec operator+(RealVec a, const RealVec& b) { return a += b; }
    friend RealVec operator-(RealVec a, const RealVec& b) { return a -= b; }
    friend RealVec operator*(double c, RealVec a) { return a *= c; }
    friend RealVec operator*(RealVec a, double c) { return a *= c; }
    friend RealVec operator-(RealVec a) { return a *= -1.0; }

    double normSq() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += e_[i] * e_[i];
        return s;
    }
    double norm() const { return std::sqrt(normSq()); }

    bool isFinite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(e_[i])) return false;
        return true;
    }

private:
    std::array<double, kMaxDim> e_{};
    int n_ = 0;
};

inline double dot(const RealVec& a, const RealVec& b) {
    assert(a.dim() == b.dim());
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double distSq(const RealVec& a, const RealVec& b) { return (a - b).normSq(); }

inline RealVec normalized(const RealVec& v) {
    double n = v.norm();
    assert(n > 0.0);
    return (1.0 / n) * v;
}

// Row-major matrix with rows <= 3 (parameter dimension) and columns <= 4
// (ambient dimension). Used for patch Jacobians and map gradients.
class SmallMat {
public:
    static constexpr int kMaxRows = 3;
    static constexpr int kMaxCols = 4;

    SmallMat() = default;
    SmallMat(int rows, int cols) : r_(rows), c_(cols) {
        assert(rows >= 0 && rows <= kMaxRows && cols >= 0 && cols <= kMaxCols);
        e_.fill(0.0);
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    double operator()(int i, int j) const { return e_[i * kMaxCols + j]; }
    double& operator()(int i, int j) { return e_[i * kMaxCols + j]; }

    RealVec row(int i) const {
        RealVec v(c_);
        for (int j = 0; j < c_; ++j) v[j] = e_[i * kMaxCols + j];
        return v;
    }
    void setRow(int i, const RealVec& v) {
        assert(v.dim() == c_);
        for (int j = 0; j < c_; ++j) e_[i * kMaxCols + j] = v[j];
    }

    // v |-> M v (treats M as rows x cols acting on a cols-vector).
    RealVec apply(const RealVec& v) const {
        assert(v.dim() == c_);
        RealVec out(r_);
        for (int i = 0; i < r_; ++i) {
            double s = 0.0;
            for (int j = 0; j < c_; ++j) s += e_[i * kMaxCols + j] * v[j];
            out[i] = s;
        }
        return out;
    }

    // w |-> M^T w (a rows-vector of coefficients combined over the rows).
    RealVec applyTransposed(const RealVec& w) const {
        assert(w.dim() == r_);
        RealVec out(c_);
        for (int j = 0; j < c_; ++j) {
            double s = 0.0;
            for (int i = 0; i < r_; ++i) s += e_[i * kMaxCols + j] * w[i];
            out[j] = s;
        }
        return out;
    }

    double frobeniusSq() const {
        double s = 0.0;
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) s += (*this)(i, j) * (*this)(i, j);
        return s;
    }

private:
    std::array<double, kMaxRows * kMaxCols> e_{};
    int r_ = 0, c_ = 0;
};

// Gram matrix G = J J^T of the Jacobian rows, returned packed as a SmallMat.
inline SmallMat gramMatrix(const SmallMat& jac) {
    SmallMat g(jac.rows(), jac.rows());
    for (int i = 0; i < jac.rows(); ++i)
        for (int j = 0; j < jac.rows(); ++j) {
            double s = 0.0;
            for (int l = 0; l < jac.cols(); ++l) s += jac(i, l) * jac(j, l);
            g(i, j) = s;
        }
    return g;
}

inline double det(const SmallMat& g) {
    assert(g.rows() == g.cols());
    switch (g.rows()) {
        case 1:
            return g(0, 0);
        case 2:
            return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
        case 3:
            return g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
                   g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
                   g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
        default:
            assert(false);
            return 0.0;
    }
}

// Solve G w = b for symmetric positive definite G of size <= 3 by Cramer.
// Returns false if |det G| <= detFloor.
bool solveSymmetric(const SmallMat& g, const RealVec& b, RealVec& w, double detFloor);

}  // namespace mcm
