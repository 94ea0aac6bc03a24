#pragma once

#include <cstddef>
#include <vector>

#include "qcplane/curve.hpp"
#include "qcplane/geometry.hpp"
#include "qcplane/grid_map.hpp"
#include "qcplane/homeo1d.hpp"

namespace qcplane {

// Boundary data on the unit square: arc-length parameters along the
// counterclockwise boundary (perimeter 4, starting at the origin corner)
// paired with points on a simple closed target curve, in matching order.
struct BoundaryMap {
    std::vector<double> params;
    std::vector<Vec2> points;

    std::size_t size() const { return params.size(); }

    // Point of the unit-square boundary at arc-length parameter p.
    static Vec2 square_point(double p);

    // Image point at parameter p, linear interpolation between samples.
    Vec2 at(double p) const;

    // Restriction of an affine map x -> Ax + c to the square boundary.
    static BoundaryMap affine(const Mat2& A, Vec2 c, std::size_t samples_per_side);

    // Throws Error("NotQuasisymmetric") on non-increasing parameters or
    // orientation reversal, Error("ImageNotSimple") on curve violations.
    void validate() const;
};

struct ExtensionResult {
    GridMap map;
    double boundary_M = 1.0;     // M-condition constant of the pulled-back data
    double distortion_sup = 1.0;
    bool affine_fast_path = false;
};

// Quasiconformal extension of quasisymmetric boundary data to the square
// interior. Exactly affine data short-circuits to the affine map itself;
// otherwise the boundary nodes are set exactly and the interior is the
// discrete harmonic extension, which is injective for convex-ish images
// (Rado-Kneser-Choquet) and has distortion controlled by the boundary
// modulus.
ExtensionResult extend_on_square(const BoundaryMap& b, std::size_t resolution = 64);

}  // namespace qcplane
