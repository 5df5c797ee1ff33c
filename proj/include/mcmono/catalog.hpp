#pragma once

#include <vector>

#include "mcmono/patch.hpp"

namespace mcm {

// A submanifold given by one or more charts. Integrals sum over charts;
// multi-chart surfaces model unions (e.g. a pair of planes).
struct Surface {
    std::vector<PatchPtr> charts;
    int k = 0;
    int n = 0;
    bool minimal = false;          // catalog-declared H == 0
    double meanCurvatureBound = 0; // catalog-declared sup |H|
    std::string label;
};

// Affine k-plane chart: p + sum u_i e_i over a box. Basis is orthonormalized.
PatchPtr makeAffinePatch(const RealVec& point, const std::vector<RealVec>& basis,
                         const Box& box, const std::string& label);

// Flat plane in R^3 through `point` with unit normal `normal`; square box of
// half-width `halfExtent` in an orthonormal tangent basis.
PatchPtr makePlanePatch(const RealVec& point, const RealVec& normal, double halfExtent,
                        const std::string& label = "plane");

// Catenoid about the x3-axis with neck radius `neck`:
//   (neck cosh(v/neck) cos u, neck cosh(v/neck) sin u, v),
// u in [0, 2pi], v in [-vHalf, vHalf]. Minimal.
PatchPtr makeCatenoidPatch(double neck, double vHalf);

// Catenoid x R in R^4 (3-dimensional, minimal):
//   (neck cosh(v/neck) cos u, neck cosh(v/neck) sin u, v, w).
PatchPtr makeCatenoidLinePatch(double neck, double vHalf, double wHalf);

// Helicoid (v cos u, v sin u, pitch*u), minimal.
PatchPtr makeHelicoidPatch(double pitch, double uHalf, double vHalf);

// Round sphere S^2(centre, radius) in polar coordinates (theta, phi) over
// [theta0, theta1] x [0, 2pi]. Mean curvature 2(centre - x)/radius^2.
PatchPtr makeSpherePolarPatch(const RealVec& centre, double radius, double theta0 = 0.0,
                              double theta1 = M_PI);

// Spherical cap as a graph z = cz + sqrt(R^2 - ...) over `box`; the box must
// stay strictly inside the equator disk.
PatchPtr makeSphereGraphPatch(const RealVec& centre, double radius, const Box& box);

// Circle of radius R about `centre` in R^2 (k = 1). Curvature vector
// (centre - x)/R^2.
PatchPtr makeCirclePatch(const RealVec& centre, double radius);

// Cylinder S^1(radius) x [-zHalf, zHalf] about the x3-axis in R^3.
// Mean curvature -(x1, x2, 0)/radius^2.
PatchPtr makeCylinderPatch(double radius, double zHalf);

// Identity chart of a box in R^m (k = n = m, flat). Integration domain for
// map energies.
PatchPtr makeBoxPatch(const Box& box, const std::string& label = "box");

// Single-chart helper.
Surface singleChartSurface(PatchPtr patch, bool minimal, double hBound, const std::string& label);

// Named minimal catalog entries used by the CLI and the test suites.
// y is the moving-centre parameter where the pose depends on it.
Surface catalogFlatDisk(const RealVec& y, bool throughY, double tiltDegrees);
Surface catalogTiltedPlane(const RealVec& y, double tiltDegrees);
Surface catalogCatenoid(double neck);
Surface catalogHelicoid(double pitch);
Surface catalogSphereCap(const RealVec& y);   // |H| = 1 cap of radius 2 through y
Surface catalogPlanePair(const RealVec& y);   // union of two planes through y

}  // namespace mcm
