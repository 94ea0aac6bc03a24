#pragma once

#include <cstddef>
#include <vector>

#include "qcplane/geometry.hpp"

namespace qcplane {

// An ordered polyline; closed curves must be simple.
struct PlanarCurve {
    bool closed = false;
    std::vector<Vec2> vertices;

    std::size_t size() const { return vertices.size(); }
    double length() const;

    // Cumulative arc length up to vertex i (0 at vertex 0).
    std::vector<double> arc_lengths() const;

    // Point at arc-length parameter s (wraps around when closed).
    Vec2 at_arclength(double s) const;

    // Throws Error("NotSimple") on duplicate consecutive vertices or, for
    // closed curves, on any proper segment crossing (segment sweep).
    void validate() const;
};

struct QuasicircleWitness {
    Vec2 z1, z2, z3;
    double ratio = 0.0;
};

struct QuasicircleReport {
    double c_best = 1.0;
    QuasicircleWitness witness;
};

// Brute-force arc-condition constant: max over vertex triples, z3 confined
// to the shorter arc between z1 and z2, of (|z1-z3|+|z2-z3|)/|z1-z2|.
QuasicircleReport quasicircle_constant(const PlanarCurve& c);

// Sample points of a circle, a square boundary, and a cusp profile, used
// as reference curves in tests and reports.
PlanarCurve circle_curve(Vec2 center, double radius, std::size_t samples);
PlanarCurve square_curve(Rect r, std::size_t samples_per_side);
// Closed curve with an inward cusp y = |x|^3 at the origin.
PlanarCurve cusp_curve(std::size_t samples);

}  // namespace qcplane
