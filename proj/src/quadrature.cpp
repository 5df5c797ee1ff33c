#include "mcmono/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

#include "mcmono/gauss.hpp"

namespace mcm {

namespace {

constexpr int kMaxK = 3;

struct Cell {
    std::array<double, kMaxK> lo{};
    std::array<double, kMaxK> hi{};
    double width(int a) const { return hi[a] - lo[a]; }
};

double cellMeasure(const Cell& c, int k) {
    double m = 1.0;
    for (int a = 0; a < k; ++a) m *= c.width(a);
    return m;
}

double cellDiag(const Cell& c, int k) {
    double s = 0.0;
    for (int a = 0; a < k; ++a) s += c.width(a) * c.width(a);
    return std::sqrt(s);
}

enum class CellClass { Outside, Inside, Crossing };

struct ClassifyResult {
    CellClass cls;
    int steepAxis = 0;  // axis of largest directional variation of g - level
};

// Root bracketing refinement (Illinois variant of regula falsi).
template <typename F>
double refineRoot(F&& f, double a, double b, double fa, double fb) {
    double sideA = fa, sideB = fb;
    for (int it = 0; it < 80; ++it) {
        const double c = (a * sideB - b * sideA) / (sideB - sideA);
        if (!(c > a && c < b)) {
            const double mid = 0.5 * (a + b);
            const double fm = f(mid);
            if ((fm < 0) == (sideA < 0)) {
                a = mid;
                sideA = fm;
            } else {
                b = mid;
                sideB = fm;
            }
        } else {
            const double fc = f(c);
            if (fc == 0.0) return c;
            if ((fc < 0) == (sideA < 0)) {
                a = c;
                sideA = fc;
                sideB *= 0.5;
            } else {
                b = c;
                sideB = fc;
                sideA *= 0.5;
            }
        }
        if (b - a <= 1e-13 * (std::abs(a) + std::abs(b) + 1e-30)) break;
    }
    return 0.5 * (a + b);
}

class SublevelEngine {
public:
    SublevelEngine(const ParametricPatch& patch, const ScalarField& g, double level,
                   const PatchIntegrand& fn, const QuadratureSpec& spec)
        : patch_(patch),
          g_(g),
          level_(level),
          fn_(fn),
          spec_(spec),
          k_(patch.paramDim()),
          ruleHi_(gaussRule(spec.order)),
          ruleLo_(gaussRule(std::max(1, spec.order - 2))) {}

    IntegralResult run() {
        const Box box = patch_.domain();
        std::array<int, kMaxK> idx{};
        iterateBaseCells(box, idx, 0);
        return {value_, err_};
    }

private:
    void iterateBaseCells(const Box& box, std::array<int, kMaxK>& idx, int axis) {
        if (axis == k_) {
            Cell c;
            for (int a = 0; a < k_; ++a) {
                const double w = box.width(a) / spec_.cellsPerAxis;
                c.lo[a] = box.lo[a] + idx[a] * w;
                c.hi[a] = (idx[a] + 1 == spec_.cellsPerAxis) ? box.hi[a] : c.lo[a] + w;
            }
            cell(c, 0);
            return;
        }
        for (int i = 0; i < spec_.cellsPerAxis; ++i) {
            idx[axis] = i;
            iterateBaseCells(box, idx, axis + 1);
        }
    }

    double hval(const RealVec& u) const { return g_.value(patch_.embed(u)) - level_; }

    // Samples g - level on the 3^k lattice of the cell. Cells whose sampled
    // range stays outside a gradient-scaled margin are classified inside or
    // outside; everything else is treated as crossing so that refinement can
    // resolve small inclusions the lattice straddles.
    ClassifyResult classify(const Cell& c) {
        std::array<double, 27> h{};
        const int npts = pow3(k_);
        for (int p = 0; p < npts; ++p) {
            RealVec u(k_);
            int rem = p;
            for (int a = 0; a < k_; ++a) {
                const int t = rem % 3;
                rem /= 3;
                u[a] = c.lo[a] + 0.5 * t * c.width(a);
            }
            h[p] = hval(u);
        }
        double hmin = h[0], hmax = h[0];
        for (int p = 1; p < npts; ++p) {
            hmin = std::min(hmin, h[p]);
            hmax = std::max(hmax, h[p]);
        }
        std::array<double, kMaxK> gmax{};
        int stride = 1;
        for (int a = 0; a < k_; ++a) {
            for (int p = 0; p < npts; ++p) {
                const int t = (p / stride) % 3;
                if (t == 2) continue;
                const double d = std::abs(h[p + stride] - h[p]) / (0.5 * c.width(a));
                gmax[a] = std::max(gmax[a], d);
            }
            stride *= 3;
        }
        ClassifyResult r;
        double margin = 0.0, best = -1.0;
        for (int a = 0; a < k_; ++a) {
            margin += 0.375 * gmax[a] * c.width(a);
            if (gmax[a] > best) {
                best = gmax[a];
                r.steepAxis = a;
            }
        }
        if (hmin > margin)
            r.cls = CellClass::Outside;
        else if (hmax < -margin)
            r.cls = CellClass::Inside;
        else
            r.cls = CellClass::Crossing;
        return r;
    }

    static int pow3(int k) { return k == 1 ? 3 : (k == 2 ? 9 : 27); }

    bool nearGradeCenter(const Cell& c) const {
        const double diag = cellDiag(c, k_);
        for (const auto& p : spec_.gradeCenters) {
            double d2 = 0.0;
            for (int a = 0; a < k_; ++a) {
                const double t = std::clamp(p[a], c.lo[a], c.hi[a]) - p[a];
                d2 += t * t;
            }
            if (std::sqrt(d2) <= 0.6 * diag) return true;
        }
        return false;
    }

    bool containsGradeCenter(const Cell& c) const {
        for (const auto& p : spec_.gradeCenters) {
            bool in = true;
            for (int a = 0; a < k_; ++a)
                if (p[a] < c.lo[a] || p[a] > c.hi[a]) in = false;
            if (in) return true;
        }
        return false;
    }

    void split(const Cell& c, int depth) {
        const int nChildren = 1 << k_;
        for (int m = 0; m < nChildren; ++m) {
            Cell ch;
            for (int a = 0; a < k_; ++a) {
                const double mid = 0.5 * (c.lo[a] + c.hi[a]);
                if (m & (1 << a)) {
                    ch.lo[a] = mid;
                    ch.hi[a] = c.hi[a];
                } else {
                    ch.lo[a] = c.lo[a];
                    ch.hi[a] = mid;
                }
            }
            cell(ch, depth + 1);
        }
    }

    void cell(const Cell& c, int depth) {
        const ClassifyResult cr = classify(c);
        if (cr.cls == CellClass::Outside) return;

        const bool grade = nearGradeCenter(c);
        if (cr.cls == CellClass::Inside) {
            if (grade && depth < spec_.gradeDepth) {
                split(c, depth);
                return;
            }
            smoothCell(c, depth);
            return;
        }

        // Crossing.
        const int minSliceDepth = std::min(k_ == 3 ? 1 : 2, spec_.refinementDepth);
        int cap = spec_.refinementDepth;
        if (grade) cap = std::max(cap, spec_.gradeDepth);
        if (depth < minSliceDepth) {
            split(c, depth);
            return;
        }
        double v = 0.0, e = 0.0, fscale = 0.0;
        if (k_ == 1) {
            // A cell is a single column.
            RealVec base(1);
            std::array<double, 14> roots{};
            const ColumnPattern pat = scanColumnAt(c, 0, base, roots);
            double hi, lo;
            integrateColumn(c, 0, base, pat, roots, hi, lo);
            value_ += hi;
            err_ += std::abs(hi - lo);
            return;
        }
        if (k_ == 2) {
            if (stripedCell(c, cr.steepAxis, v, e)) {
                value_ += v;
                err_ += e;
                return;
            }
            const bool uniform = slicedCell2(c, cr.steepAxis, v, e, fscale);
            if (!uniform && depth < cap + 2) {
                split(c, depth);
                return;
            }
            value_ += v;
            err_ += e;
            if (!uniform) err_ += 0.1 * fscale * cellMeasure(c, k_);
            return;
        }
        // k = 3: adaptive transverse quadtree over the two perpendicular
        // axes; each column resolves its own cut exactly, the quadtree
        // refines across silhouette kinks on embedded-rule estimates.
        transverseQuad(c, cr.steepAxis, 0, c.lo[perpAxis(cr.steepAxis, 0)],
                       c.hi[perpAxis(cr.steepAxis, 0)], c.lo[perpAxis(cr.steepAxis, 1)],
                       c.hi[perpAxis(cr.steepAxis, 1)]);
    }

    static int perpAxis(int axis, int which) {
        int perp[2] = {-1, -1};
        int j = 0;
        for (int a = 0; a < 3; ++a)
            if (a != axis) perp[j++] = a;
        return perp[which];
    }

    void transverseQuad(const Cell& c, int axis, int tDepth, double a0, double b0, double a1,
                        double b1) {
        const int p0 = perpAxis(axis, 0), p1 = perpAxis(axis, 1);
        auto colVal = [&](double t0, double t1) {
            RealVec base(3);
            base[p0] = t0;
            base[p1] = t1;
            std::array<double, 14> roots{};
            const ColumnPattern pat = scanColumnAt(c, axis, base, roots);
            double hi, lo;
            integrateColumn(c, axis, base, pat, roots, hi, lo);
            return std::pair<double, double>{hi, lo};
        };
        // Clenshaw-Curtis 5x5 across the transverse box; the 3x3 Simpson
        // subset on the shared nodes provides the embedded estimate without
        // extra column scans.
        static constexpr double ccNode[5] = {-1.0, -M_SQRT1_2, 0.0, M_SQRT1_2, 1.0};
        static constexpr double ccW[5] = {1.0 / 15.0, 8.0 / 15.0, 12.0 / 15.0, 8.0 / 15.0,
                                          1.0 / 15.0};
        static constexpr double spW[5] = {1.0 / 3.0, 0.0, 4.0 / 3.0, 0.0, 1.0 / 3.0};
        double vHi = 0.0, vLo = 0.0, axisErr = 0.0;
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const double t0 = a0 + 0.5 * (b0 - a0) * (1.0 + ccNode[i]);
                const double t1 = a1 + 0.5 * (b1 - a1) * (1.0 + ccNode[j]);
                const double scale = 0.25 * (b0 - a0) * (b1 - a1);
                const auto [hi, lo] = colVal(t0, t1);
                vHi += scale * ccW[i] * ccW[j] * hi;
                vLo += scale * spW[i] * spW[j] * hi;
                axisErr += scale * ccW[i] * ccW[j] * std::abs(hi - lo);
            }
        }
        // Only the transverse embedded difference drives refinement; the
        // axis-direction error cannot shrink by transverse splitting.
        const double eTrans = std::abs(vHi - vLo);
        if (eTrans > 1e-8 + 1e-5 * std::abs(vHi) && tDepth < 3) {
            const double m0 = 0.5 * (a0 + b0), m1 = 0.5 * (a1 + b1);
            transverseQuad(c, axis, tDepth + 1, a0, m0, a1, m1);
            transverseQuad(c, axis, tDepth + 1, m0, b0, a1, m1);
            transverseQuad(c, axis, tDepth + 1, a0, m0, m1, b1);
            transverseQuad(c, axis, tDepth + 1, m0, b0, m1, b1);
            return;
        }
        value_ += vHi;
        err_ += eTrans + axisErr;
    }

    void smoothCell(const Cell& c, int depth) {
        const double vHi = tensorGauss(c, ruleHi_);
        const double vLo = tensorGauss(c, ruleLo_);
        value_ += vHi;
        double e = std::abs(vHi - vLo);
        if (depth >= spec_.gradeDepth && containsGradeCenter(c)) e += std::abs(vHi);
        err_ += e;
    }

    double evalIntegrand(const RealVec& u) const {
        PatchPoint pt;
        pt.patch = &patch_;
        pt.u = u;
        pt.x = patch_.embed(u);
        pt.jac = patch_.jacobian(u);
        return fn_(pt) * areaElement(pt.jac);
    }

    double tensorGauss(const Cell& c, const GaussRule& rule) {
        const int n = static_cast<int>(rule.nodes.size());
        double sum = 0.0;
        std::array<int, kMaxK> idx{};
        for (;;) {
            RealVec u(k_);
            double w = 1.0;
            for (int a = 0; a < k_; ++a) {
                const double half = 0.5 * c.width(a);
                u[a] = c.lo[a] + half * (1.0 + rule.nodes[idx[a]]);
                w *= half * rule.weights[idx[a]];
            }
            sum += w * evalIntegrand(u);
            int a = 0;
            while (a < k_ && ++idx[a] == n) idx[a++] = 0;
            if (a == k_) break;
        }
        return sum;
    }

    struct ColumnPattern {
        int nRoots = 0;
        bool insideLo = false;
        bool operator==(const ColumnPattern&) const = default;
    };

    // Root scan of g - level along `axis` at a fixed transverse position.
    ColumnPattern scanColumnAt(const Cell& c, int axis, const RealVec& base,
                               std::array<double, 14>& roots) {
        auto psi = [&](double s) {
            RealVec uu = base;
            uu[axis] = s;
            return hval(uu);
        };
        const int M = static_cast<int>(ruleHi_.nodes.size()) + 4;
        std::array<double, 16> sv{};
        std::array<double, 16> sx{};
        for (int i = 0; i < M; ++i) {
            sx[i] = c.lo[axis] + c.width(axis) * i / (M - 1);
            sv[i] = psi(sx[i]);
        }
        ColumnPattern pat;
        for (int i = 0; i + 1 < M; ++i) {
            if ((sv[i] < 0) != (sv[i + 1] < 0))
                roots[pat.nRoots++] = refineRoot(psi, sx[i], sx[i + 1], sv[i], sv[i + 1]);
        }
        pat.insideLo = sv[0] < 0;
        return pat;
    }

    // Integral over the inside sub-intervals of one column, with the
    // embedded lower-order value for the error estimate.
    void integrateColumn(const Cell& c, int axis, const RealVec& base,
                         const ColumnPattern& pat, const std::array<double, 14>& roots,
                         double& hi, double& lo) {
        hi = 0.0;
        lo = 0.0;
        bool inside = pat.insideLo;
        double segLo = c.lo[axis];
        for (int r = 0; r <= pat.nRoots; ++r) {
            const double segHi = (r == pat.nRoots) ? c.hi[axis] : roots[r];
            if (inside && segHi > segLo) {
                const double half = 0.5 * (segHi - segLo);
                for (std::size_t i = 0; i < ruleHi_.nodes.size(); ++i) {
                    RealVec uu = base;
                    uu[axis] = segLo + half * (1.0 + ruleHi_.nodes[i]);
                    hi += half * ruleHi_.weights[i] * evalIntegrand(uu);
                }
                for (std::size_t i = 0; i < ruleLo_.nodes.size(); ++i) {
                    RealVec uu = base;
                    uu[axis] = segLo + half * (1.0 + ruleLo_.nodes[i]);
                    lo += half * ruleLo_.weights[i] * evalIntegrand(uu);
                }
            }
            inside = !inside;
            segLo = segHi;
        }
    }

    // Exact cut handling for k = 2: locate the transverse positions where
    // the root pattern changes (cut tangencies and face exits) and split the
    // transverse interval there. Each uniform stripe is integrated with a
    // tanh-sinh rule, whose exponential node clustering absorbs the
    // square-root behaviour of the cut at (or just beyond) stripe ends.
    // Returns false if the pattern structure is too wild, in which case the
    // caller falls back to dyadic refinement.
    bool stripedCell(const Cell& c, int axis, double& value, double& err) {
        value = 0.0;
        err = 0.0;
        const int p = 1 - axis;
        const double plo = c.lo[p], phi = c.hi[p];
        const double width = phi - plo;

        auto patternAt = [&](double tau) {
            RealVec base(2);
            base[p] = tau;
            std::array<double, 14> roots{};
            return scanColumnAt(c, axis, base, roots);
        };

        constexpr int kStations = 11;
        std::array<ColumnPattern, kStations> pats;
        for (int i = 0; i < kStations; ++i)
            pats[i] = patternAt(plo + width * i / (kStations - 1));

        std::vector<double> cuts;
        for (int i = 0; i + 1 < kStations; ++i) {
            if (pats[i] == pats[i + 1]) continue;
            if (cuts.size() == 4) return false;
            double a = plo + width * i / (kStations - 1);
            double b = plo + width * (i + 1) / (kStations - 1);
            const ColumnPattern left = pats[i];
            for (int it = 0; it < 45 && b - a > 1e-13 * width; ++it) {
                const double mid = 0.5 * (a + b);
                if (patternAt(mid) == left)
                    a = mid;
                else
                    b = mid;
            }
            cuts.push_back(0.5 * (a + b));
        }

        std::vector<double> bounds{plo};
        bounds.insert(bounds.end(), cuts.begin(), cuts.end());
        bounds.push_back(phi);

        const TanhSinhRule& rule = tanhSinhRule();
        for (std::size_t sIdx = 0; sIdx + 1 < bounds.size(); ++sIdx) {
            const double a = bounds[sIdx], b = bounds[sIdx + 1];
            const double len = b - a;
            if (len < 1e-13 * width) continue;
            const ColumnPattern stripePat = patternAt(a + 0.5 * len);
            double vHi = 0.0, vLo = 0.0, vHalf = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double tau = a + 0.5 * len * (1.0 + rule.nodes[i]);
                const double w = 0.5 * len * rule.weights[i];
                RealVec base(2);
                base[p] = tau;
                std::array<double, 14> roots{};
                const ColumnPattern colPat = scanColumnAt(c, axis, base, roots);
                if (!(colPat == stripePat)) {
                    // Transition-grazing node: drop it if hugging a stripe
                    // end, otherwise the stripe structure is unresolved.
                    if (std::min(tau - a, b - tau) < 1e-8 * len) continue;
                    return false;
                }
                double colHi, colLo;
                integrateColumn(c, axis, base, colPat, roots, colHi, colLo);
                vHi += w * colHi;
                vLo += w * colLo;
                if (i % 2 == 0) vHalf += 2.0 * w * colHi;
            }
            value += vHi;
            err += std::abs(vHi - vLo) + std::abs(vHi - vHalf);
        }
        err += 1e-15 * std::abs(value);
        return true;
    }

    // Resolves the cut within a cell by scanning for roots of g - level
    // along `axis` at tensor Gauss nodes of the transverse axes, then
    // integrating the sub-intervals where g < level. Each column is exact on
    // its own; the return value reports whether the root pattern is uniform
    // across columns (a graph-like cut, so the transverse rule is smooth).
    bool slicedCell2(const Cell& c, int axis, double& value, double& err, double& fscale) {
        value = 0.0;
        err = 0.0;
        fscale = 0.0;
        const int nHi = static_cast<int>(ruleHi_.nodes.size());
        const int nCols = (k_ == 1) ? 1 : (k_ == 2 ? nHi : nHi * nHi);
        int perp[2] = {-1, -1};
        {
            int j = 0;
            for (int a = 0; a < k_; ++a)
                if (a != axis) perp[j++] = a;
        }
        int refRoots = -1;
        bool refInsideLo = false;
        bool uniform = true;
        double vHi = 0.0, vLo = 0.0;

        const int M = nHi + 4;
        auto scanColumn = [&](const RealVec& base, std::array<double, 14>& roots) {
            auto psi = [&](double s) {
                RealVec uu = base;
                uu[axis] = s;
                return hval(uu);
            };
            std::array<double, 16> sv{};
            std::array<double, 16> sx{};
            for (int i = 0; i < M; ++i) {
                sx[i] = c.lo[axis] + c.width(axis) * i / (M - 1);
                sv[i] = psi(sx[i]);
            }
            int nRoots = 0;
            for (int i = 0; i + 1 < M; ++i) {
                if ((sv[i] < 0) != (sv[i + 1] < 0))
                    roots[nRoots++] = refineRoot(psi, sx[i], sx[i + 1], sv[i], sv[i + 1]);
            }
            return std::pair<int, bool>{nRoots, sv[0] < 0};
        };

        // Probe the root pattern on the transverse 3-lattice (in particular
        // at the cell edges): a cut exiting through a slice-parallel face
        // between Gauss nodes would otherwise be invisible and leaves a kink
        // in the transverse integrand.
        const int nProbe = (k_ == 1) ? 1 : (k_ == 2 ? 3 : 9);
        for (int pr = 0; pr < nProbe; ++pr) {
            RealVec u(k_);
            int rem = pr;
            for (int j = 0; j < k_ - 1; ++j) {
                const int a = perp[j];
                const int i = rem % 3;
                rem /= 3;
                u[a] = c.lo[a] + 0.5 * i * c.width(a);
            }
            std::array<double, 14> roots{};
            const auto [nRoots, insideLo] = scanColumn(u, roots);
            if (pr == 0) {
                refRoots = nRoots;
                refInsideLo = insideLo;
            } else if (nRoots != refRoots || insideLo != refInsideLo) {
                uniform = false;
            }
        }

        for (int col = 0; col < nCols; ++col) {
            RealVec u(k_);
            double wPerp = 1.0;
            int rem = col;
            for (int j = 0; j < k_ - 1; ++j) {
                const int a = perp[j];
                const int i = rem % nHi;
                rem /= nHi;
                const double half = 0.5 * c.width(a);
                u[a] = c.lo[a] + half * (1.0 + ruleHi_.nodes[i]);
                wPerp *= half * ruleHi_.weights[i];
            }
            std::array<double, 14> roots{};
            const auto [nRoots, insideLo] = scanColumn(u, roots);
            if (nRoots != refRoots || insideLo != refInsideLo) uniform = false;
            // Integrate the inside sub-intervals along the axis.
            bool inside = insideLo;
            double segLo = c.lo[axis];
            for (int r = 0; r <= nRoots; ++r) {
                const double segHi = (r == nRoots) ? c.hi[axis] : roots[r];
                if (inside && segHi > segLo) {
                    double sHi = 0.0, sLo = 0.0;
                    const double half = 0.5 * (segHi - segLo);
                    for (std::size_t i = 0; i < ruleHi_.nodes.size(); ++i) {
                        RealVec uu = u;
                        uu[axis] = segLo + half * (1.0 + ruleHi_.nodes[i]);
                        const double f = evalIntegrand(uu);
                        fscale = std::max(fscale, std::abs(f));
                        sHi += half * ruleHi_.weights[i] * f;
                    }
                    for (std::size_t i = 0; i < ruleLo_.nodes.size(); ++i) {
                        RealVec uu = u;
                        uu[axis] = segLo + half * (1.0 + ruleLo_.nodes[i]);
                        sLo += half * ruleLo_.weights[i] * evalIntegrand(uu);
                    }
                    vHi += wPerp * sHi;
                    vLo += wPerp * sLo;
                }
                inside = !inside;
                segLo = segHi;
            }
        }
        value = vHi;
        err = std::abs(vHi - vLo) + 1e-14 * std::abs(vHi);
        return uniform;
    }

    const ParametricPatch& patch_;
    const ScalarField& g_;
    double level_;
    const PatchIntegrand& fn_;
    const QuadratureSpec& spec_;
    int k_;
    const GaussRule& ruleHi_;
    const GaussRule& ruleLo_;
    double value_ = 0.0;
    double err_ = 0.0;
};

// h-adaptive full-cell integration driven by embedded-rule error estimates.
class AdaptiveEngine {
public:
    AdaptiveEngine(const ParametricPatch& patch, const PatchIntegrand& fn,
                   const QuadratureSpec& spec, double relTol, const Box& window)
        : patch_(patch),
          fn_(fn),
          spec_(spec),
          relTol_(relTol),
          window_(window),
          k_(patch.paramDim()),
          ruleHi_(gaussRule(spec.order)),
          ruleLo_(gaussRule(std::max(1, spec.order - 2))) {}

    IntegralResult run() {
        // Coarse pass for the tolerance scale.
        std::vector<Cell> base;
        std::array<int, kMaxK> idx{};
        collectBase(idx, 0, base);
        double coarse = 0.0;
        for (const auto& c : base) coarse += std::abs(tensorGauss(c, ruleHi_));
        // The absolute floor keeps numerically-zero integrands (cancelling
        // contractions evaluate to ~1e-30, not 0) from driving refinement.
        const double budgetTotal = std::max(relTol_ * coarse, 1e-14 * (1.0 + coarse));
        const double perCell = budgetTotal / static_cast<double>(base.size());
        for (const auto& c : base) cell(c, 0, perCell);
        return {value_, err_};
    }

private:
    void collectBase(std::array<int, kMaxK>& idx, int axis, std::vector<Cell>& out) {
        if (axis == k_) {
            Cell c;
            for (int a = 0; a < k_; ++a) {
                const double w = window_.width(a) / spec_.cellsPerAxis;
                c.lo[a] = window_.lo[a] + idx[a] * w;
                c.hi[a] = (idx[a] + 1 == spec_.cellsPerAxis) ? window_.hi[a] : c.lo[a] + w;
            }
            out.push_back(c);
            return;
        }
        for (int i = 0; i < spec_.cellsPerAxis; ++i) {
            idx[axis] = i;
            collectBase(idx, axis + 1, out);
        }
    }

    void cell(const Cell& c, int depth, double budget) {
        const double vHi = tensorGauss(c, ruleHi_);
        const double vLo = tensorGauss(c, ruleLo_);
        const double e = std::abs(vHi - vLo);
        const int maxDepth = spec_.refinementDepth + 6;
        bool grade = false;
        for (const auto& p : spec_.gradeCenters) {
            double d2 = 0.0;
            for (int a = 0; a < k_; ++a) {
                const double t = std::clamp(p[a], c.lo[a], c.hi[a]) - p[a];
                d2 += t * t;
            }
            if (std::sqrt(d2) <= 0.6 * cellDiag(c, k_)) grade = true;
        }
        const bool wantSplit = (e > budget && depth < maxDepth) ||
                               (grade && depth < std::min(spec_.gradeDepth, maxDepth));
        if (!wantSplit) {
            value_ += vHi;
            err_ += e;
            return;
        }
        const int nChildren = 1 << k_;
        const double childBudget = budget / nChildren;
        for (int m = 0; m < nChildren; ++m) {
            Cell ch;
            for (int a = 0; a < k_; ++a) {
                const double mid = 0.5 * (c.lo[a] + c.hi[a]);
                if (m & (1 << a)) {
                    ch.lo[a] = mid;
                    ch.hi[a] = c.hi[a];
                } else {
                    ch.lo[a] = c.lo[a];
                    ch.hi[a] = mid;
                }
            }
            cell(ch, depth + 1, childBudget);
        }
    }

    double tensorGauss(const Cell& c, const GaussRule& rule) {
        const int n = static_cast<int>(rule.nodes.size());
        double sum = 0.0;
        std::array<int, kMaxK> idx{};
        for (;;) {
            RealVec u(k_);
            double w = 1.0;
            for (int a = 0; a < k_; ++a) {
                const double half = 0.5 * c.width(a);
                u[a] = c.lo[a] + half * (1.0 + rule.nodes[idx[a]]);
                w *= half * rule.weights[idx[a]];
            }
            PatchPoint pt;
            pt.patch = &patch_;
            pt.u = u;
            pt.x = patch_.embed(u);
            pt.jac = patch_.jacobian(u);
            sum += w * fn_(pt) * areaElement(pt.jac);
            int a = 0;
            while (a < k_ && ++idx[a] == n) idx[a++] = 0;
            if (a == k_) break;
        }
        return sum;
    }

    const ParametricPatch& patch_;
    const PatchIntegrand& fn_;
    const QuadratureSpec& spec_;
    double relTol_;
    Box window_;
    int k_;
    const GaussRule& ruleHi_;
    const GaussRule& ruleLo_;
    double value_ = 0.0;
    double err_ = 0.0;
};

RealVec paramGradient(const ParametricPatch& patch, const ScalarField& g, const RealVec& u) {
    const int k = patch.paramDim();
    if (g.gradient) {
        return patch.jacobian(u).apply(g.gradient(patch.embed(u)));
    }
    RealVec grad(k);
    for (int i = 0; i < k; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(u[i]));
        RealVec up = u, um = u;
        up[i] += h;
        um[i] -= h;
        grad[i] = (g.value(patch.embed(up)) - g.value(patch.embed(um))) / (2.0 * h);
    }
    return grad;
}

// Newton projection of u onto {g(embed(.)) = level} along the parameter
// gradient. Throws RegularValueError if the gradient degenerates.
RealVec projectToLevel(const ParametricPatch& patch, const ScalarField& g, double level,
                       RealVec u, double gradFloor) {
    const Box box = patch.domain();
    for (int it = 0; it < 40; ++it) {
        const double h = g.value(patch.embed(u)) - level;
        const RealVec grad = paramGradient(patch, g, u);
        const double g2 = grad.normSq();
        // The floor must be checked even when already converged: phantom
        // crossings produced by rounding at a tangent level land here with
        // |h| at noise scale and a degenerate gradient.
        if (std::sqrt(g2) < gradFloor)
            throw RegularValueError("level value too close to critical on patch '" +
                                    patch.label() + "'");
        if (std::abs(h) <= 1e-13 * (1.0 + std::abs(level))) return u;
        u -= (h / g2) * grad;
        for (int a = 0; a < box.dim(); ++a) u[a] = std::clamp(u[a], box.lo[a], box.hi[a]);
    }
    const double h = g.value(patch.embed(u)) - level;
    if (std::abs(h) > 1e-10 * (1.0 + std::abs(level)))
        throw RegularValueError("Newton projection onto level set failed on patch '" +
                                patch.label() + "'");
    return u;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (cellsPerAxis < 1) throw DomainError("cellsPerAxis must be >= 1");
    if (order < 2 || order > 10) throw DomainError("order must be in 2..10");
    if (refinementDepth < 0 || refinementDepth > 12)
        throw DomainError("refinementDepth must be in 0..12");
    if (gradeDepth < 0 || gradeDepth > 12) throw DomainError("gradeDepth must be in 0..12");
}

namespace {

// Polar-coordinate integral of the engine integrand over the parameter ball
// |u - p| <= rho (k = 2 or 3). The r^(k-1) factor regularizes integrable
// point singularities; tanh-sinh in r absorbs fractional powers. Assumes an
// identity-type chart (parameter space is the integration space), which is
// what the map-energy domain boxes provide.
IntegralResult radialBall(const ParametricPatch& patch, const PatchIntegrand& fn,
                          const RealVec& p, double rho) {
    const int k = patch.paramDim();
    auto eval = [&](const RealVec& u) {
        PatchPoint pt;
        pt.patch = &patch;
        pt.u = u;
        pt.x = patch.embed(u);
        pt.jac = patch.jacobian(u);
        return fn(pt) * areaElement(pt.jac);
    };
    const TanhSinhRule& rRule = tanhSinhRule();
    auto run = [&](int nTheta, int nPhi, bool coarseR) {
        double total = 0.0;
        const GaussRule& thetaRule = gaussRule(nTheta);
        for (std::size_t ir = 0; ir < rRule.nodes.size(); ++ir) {
            if (coarseR && ir % 2 != 0) continue;
            const double r = 0.5 * rho * (1.0 + rRule.nodes[ir]);
            const double wr = (coarseR ? 2.0 : 1.0) * 0.5 * rho * rRule.weights[ir];
            if (r <= 0.0) continue;
            double shell = 0.0;
            if (k == 3) {
                for (int it = 0; it < nTheta; ++it) {
                    const double theta = 0.5 * M_PI * (1.0 + thetaRule.nodes[it]);
                    const double wt = 0.5 * M_PI * thetaRule.weights[it] * std::sin(theta);
                    double ring = 0.0;
                    for (int ip = 0; ip < nPhi; ++ip) {
                        const double phi = 2.0 * M_PI * ip / nPhi;
                        RealVec u = p;
                        u[0] += r * std::sin(theta) * std::cos(phi);
                        u[1] += r * std::sin(theta) * std::sin(phi);
                        u[2] += r * std::cos(theta);
                        ring += eval(u);
                    }
                    shell += wt * ring * (2.0 * M_PI / nPhi);
                }
                shell *= r * r;
            } else {  // k == 2
                double ring = 0.0;
                for (int ip = 0; ip < nPhi; ++ip) {
                    const double phi = 2.0 * M_PI * ip / nPhi;
                    RealVec u = p;
                    u[0] += r * std::cos(phi);
                    u[1] += r * std::sin(phi);
                    ring += eval(u);
                }
                shell = ring * (2.0 * M_PI / nPhi) * r;
            }
            total += wr * shell;
        }
        return total;
    };
    const double fine = run(16, 32, false);
    const double coarse = run(12, 24, true);
    return {fine, std::abs(fine - coarse)};
}

}  // namespace

IntegralResult integrateSublevel(const ParametricPatch& patch, const ScalarField& g,
                                 double level, const PatchIntegrand& integrand,
                                 const QuadratureSpec& spec) {
    spec.validate();
    const int k = patch.paramDim();
    assert(k <= kMaxK);
    IntegralResult r;

    // Integrable point singularities: carve a polar-integrated ball around
    // each grade centre and let the engine see its complement through a
    // max-composed field.
    std::vector<std::pair<RealVec, double>> balls;
    if (!spec.gradeCenters.empty() && k >= 2 && k == patch.ambientDim()) {
        const Box box = patch.domain();
        for (const auto& p : spec.gradeCenters) {
            if (!box.contains(p)) continue;
            if (g.value(patch.embed(p)) - level >= 0.0) continue;  // centre not interior
            double minRoot = 1e30;
            for (int a = 0; a < k; ++a)
                minRoot = std::min({minRoot, box.hi[a] - p[a], p[a] - box.lo[a]});
            // Probe the lattice directions for the nearest boundary crossing.
            const int nDirs = k == 2 ? 8 : 26;
            for (int d = 0; d < nDirs; ++d) {
                RealVec dir(k);
                int rem = d < (nDirs / 2) ? d : d + 1;  // skip the zero vector
                for (int a = 0; a < k; ++a) {
                    dir[a] = static_cast<double>(rem % 3 - 1);
                    rem /= 3;
                }
                dir = normalized(dir);
                const double rMax = minRoot;
                const int nSamp = 48;
                double prev = 0.0;
                for (int i = 1; i <= nSamp; ++i) {
                    const double rr = rMax * i / nSamp;
                    const double h = g.value(patch.embed(p + rr * dir)) - level;
                    if (h >= 0.0) {
                        minRoot = std::min(minRoot, prev + (rr - prev) * 0.5);
                        break;
                    }
                    prev = rr;
                }
            }
            const double rho = 0.6 * minRoot;
            if (rho > 1e-8) balls.push_back({p, rho});
        }
    }

    if (balls.empty()) {
        SublevelEngine engine(patch, g, level, integrand, spec);
        r = engine.run();
    } else {
        ScalarField carved;
        const ScalarField base = g;
        const double lvl = level;
        carved.value = [base, lvl, balls](const RealVec& x) {
            double carve = -1e300;
            for (const auto& [p, rho] : balls)
                carve = std::max(carve, rho * rho - distSq(x, p));
            // The balls sit strictly inside the sub-level region, so a
            // point inside one never needs the base field.
            if (carve > 0.0) return carve;
            return std::max(base.value(x) - lvl, carve);
        };
        QuadratureSpec flatSpec = spec;
        flatSpec.gradeCenters.clear();
        SublevelEngine engine(patch, carved, 0.0, integrand, flatSpec);
        r = engine.run();
        for (const auto& [p, rho] : balls) {
            const IntegralResult ballPart = radialBall(patch, integrand, p, rho);
            r.value += ballPart.value;
            r.errorBound += ballPart.errorBound;
        }
    }

    if (spec.targetTol > 0 && r.errorBound > spec.targetTol * (1.0 + std::abs(r.value)))
        throw ToleranceNotMetError("sublevel quadrature bound above request on patch '" +
                                       patch.label() + "'",
                                   r.errorBound);
    return r;
}

IntegralResult integratePatch(const ParametricPatch& patch, const PatchIntegrand& integrand,
                              const QuadratureSpec& spec, double relTol, const Box* window) {
    spec.validate();
    assert(patch.paramDim() <= kMaxK);
    const Box box = window ? *window : patch.domain();
    AdaptiveEngine engine(patch, integrand, spec, relTol, box);
    IntegralResult r = engine.run();
    if (spec.targetTol > 0 && r.errorBound > spec.targetTol * (1.0 + std::abs(r.value)))
        throw ToleranceNotMetError("patch quadrature bound above request on patch '" +
                                       patch.label() + "'",
                                   r.errorBound);
    return r;
}

LevelPolyline extractLevelCurve(const ParametricPatch& patch, const ScalarField& g,
                                double level, const QuadratureSpec& spec) {
    spec.validate();
    if (patch.paramDim() != 2)
        throw DomainError("level curve extraction requires a 2-dimensional patch");
    const Box box = patch.domain();
    // Scale-aware regular-value floor: rounding noise at a tangent level
    // produces phantom crossings whose projected gradients are tiny.
    const double gradFloor = 1e-5 * (1.0 + std::abs(level));
    // Cells that may cross the level set are refined to a uniform depth, so
    // neighbouring emitting cells always share edge crossings.
    const int targetDepth = std::clamp(spec.refinementDepth - 2, 3, 7);

    double minAbsH = 1e300;
    auto hAt = [&](double u0, double u1) {
        const double h = g.value(patch.embed(RealVec{u0, u1})) - level;
        minAbsH = std::min(minAbsH, std::abs(h));
        return h;
    };

    LevelPolyline poly;
    // Edge ids: 0 = south, 1 = east, 2 = north, 3 = west.
    auto emitCell = [&](double u0, double v0, double du, double dv, double h00, double h10,
                        double h11, double h01) {
        auto lerp = [](double a, double b, double ha, double hb) {
            return a + (b - a) * (ha / (ha - hb));
        };
        auto edgePoint = [&](int edge) {
            switch (edge) {
                case 0: return RealVec{lerp(u0, u0 + du, h00, h10), v0};
                case 1: return RealVec{u0 + du, lerp(v0, v0 + dv, h10, h11)};
                case 2: return RealVec{lerp(u0, u0 + du, h01, h11), v0 + dv};
                default: return RealVec{u0, lerp(v0, v0 + dv, h00, h01)};
            }
        };
        auto addSegment = [&](int ea, int eb) {
            RealVec a = projectToLevel(patch, g, level, edgePoint(ea), gradFloor);
            RealVec b = projectToLevel(patch, g, level, edgePoint(eb), gradFloor);
            if (distSq(a, b) > 1e-26) poly.segments.push_back({a, b});
        };
        const int idx = (h00 < 0 ? 1 : 0) | (h10 < 0 ? 2 : 0) | (h11 < 0 ? 4 : 0) |
                        (h01 < 0 ? 8 : 0);
        switch (idx) {
            case 0: case 15: break;
            case 1: case 14: addSegment(3, 0); break;
            case 2: case 13: addSegment(0, 1); break;
            case 4: case 11: addSegment(1, 2); break;
            case 8: case 7: addSegment(2, 3); break;
            case 3: case 12: addSegment(3, 1); break;
            case 6: case 9: addSegment(0, 2); break;
            case 5: case 10: {
                // Saddle: disambiguate with the centre value.
                const bool centreInside = hAt(u0 + 0.5 * du, v0 + 0.5 * dv) < 0;
                const bool diag00 = (idx == 5);
                if (diag00 == centreInside) {
                    addSegment(0, 1);
                    addSegment(2, 3);
                } else {
                    addSegment(3, 0);
                    addSegment(1, 2);
                }
                break;
            }
            default: break;
        }
    };

    // Depth-first descent; a cell is suspicious if its corner signs differ
    // or the minimum corner magnitude is within a gradient-scaled margin.
    auto recurse = [&](auto&& self, double u0, double v0, double du, double dv, double h00,
                       double h10, double h11, double h01, int depth) -> void {
        const bool signChange = ((h00 < 0) != (h10 < 0)) || ((h00 < 0) != (h11 < 0)) ||
                                ((h00 < 0) != (h01 < 0));
        if (!signChange) {
            const double gu = (std::abs(h10 - h00) + std::abs(h11 - h01)) * 0.5;
            const double gv = (std::abs(h01 - h00) + std::abs(h11 - h10)) * 0.5;
            const double margin = 0.9 * (gu + gv);
            const double hmin = std::min(std::min(std::abs(h00), std::abs(h10)),
                                         std::min(std::abs(h11), std::abs(h01)));
            if (hmin > margin) return;
        }
        if (depth == targetDepth) {
            if (signChange) emitCell(u0, v0, du, dv, h00, h10, h11, h01);
            return;
        }
        const double um = u0 + 0.5 * du, vm = v0 + 0.5 * dv;
        const double hs = hAt(um, v0), he = hAt(u0 + du, vm), hn = hAt(um, v0 + dv),
                     hw = hAt(u0, vm), hc = hAt(um, vm);
        self(self, u0, v0, 0.5 * du, 0.5 * dv, h00, hs, hc, hw, depth + 1);
        self(self, um, v0, 0.5 * du, 0.5 * dv, hs, h10, he, hc, depth + 1);
        self(self, u0, vm, 0.5 * du, 0.5 * dv, hw, hc, hn, h01, depth + 1);
        self(self, um, vm, 0.5 * du, 0.5 * dv, hc, he, h11, hn, depth + 1);
    };

    const int n = spec.cellsPerAxis;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double u0 = box.lo[0] + box.width(0) * i / n;
            const double v0 = box.lo[1] + box.width(1) * j / n;
            const double du = box.lo[0] + box.width(0) * (i + 1) / n - u0;
            const double dv = box.lo[1] + box.width(1) * (j + 1) / n - v0;
            recurse(recurse, u0, v0, du, dv, hAt(u0, v0), hAt(u0 + du, v0),
                    hAt(u0 + du, v0 + dv), hAt(u0, v0 + dv), 0);
        }
    }
    // A level set that touches the surface without sign changes (tangent or
    // critical level) would otherwise be silently empty.
    if (poly.segments.empty() && minAbsH <= 1e-6 * (1.0 + std::abs(level)))
        throw RegularValueError("level value is critical or tangent on patch '" +
                                patch.label() + "'");
    return poly;
}

double integrateLevelCurve(const ParametricPatch& patch, const ScalarField& g, double level,
                           const PatchIntegrand& integrand, const QuadratureSpec& spec) {
    const LevelPolyline poly = extractLevelCurve(patch, g, level, spec);
    if (poly.segments.empty()) return 0.0;
    const GaussRule& rule = gaussRule(std::max(4, spec.order - 2));
    const double gradFloor = 1e-5 * (1.0 + std::abs(level));
    const double dTau = 3e-4;
    double total = 0.0;
    for (const auto& seg : poly.segments) {
        auto curvePoint = [&](double tau) {
            const RealVec base = seg.uStart + tau * (seg.uEnd - seg.uStart);
            return projectToLevel(patch, g, level, base, gradFloor);
        };
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double tau = 0.5 * (1.0 + rule.nodes[i]);
            const RealVec q = curvePoint(tau);
            const RealVec qp = curvePoint(tau + dTau);
            const RealVec qm = curvePoint(tau - dTau);
            const RealVec qdot = (1.0 / (2.0 * dTau)) * (qp - qm);
            PatchPoint pt;
            pt.patch = &patch;
            pt.u = q;
            pt.x = patch.embed(q);
            pt.jac = patch.jacobian(q);
            const double speed = pt.jac.applyTransposed(qdot).norm();
            sum += 0.5 * rule.weights[i] * integrand(pt) * speed;
        }
        total += sum;
    }
    return total;
}

}  // namespace mcm
