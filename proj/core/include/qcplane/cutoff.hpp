#pragma once

#include <cstddef>
#include <vector>

#include "qcplane/curve.hpp"
#include "qcplane/geometry.hpp"
#include "qcplane/grid_map.hpp"
#include "qcplane/homeo1d.hpp"

namespace qcplane {

struct CellIndex {
    std::size_t i, j;
};

// A lattice edge crossing the middle ring, oriented from its outer-side
// node towards its inner-side node.
struct GridEdge {
    std::size_t id = 0;
    Vec2 outer_node, inner_node;
};

// Shell partition of a rectangle at pitch eps: an outer collar of depth
// 2*gamma cells, a one-cell middle ring, and the inner remainder.
struct Partition {
    double eps = 0.0;
    std::size_t gamma = 1;
    std::size_t cells_x = 0, cells_y = 0;
    std::vector<CellIndex> outer, mid, inner;
    std::vector<GridEdge> edges;  // lattice edges between two mid cells
    double modified_measure = 0.0;  // |outer u mid| = (#outer + #mid) eps^2
};

struct Bridge {
    std::size_t edge_id = 0;
    double r = 0.0;           // touching radius
    Vec2 z0;                  // touching point in image coordinates
    Vec2 x_star, xk_star;     // circle preimages of z0 under y and yk
    Mat2 phi1_lin, phi2_lin;  // affine reparametrizations of the two half edges
    Vec2 phi1_off, phi2_off;
    PlanarCurve omega;        // bridge image, parameter s in [0, eps] uniform
    bool reparametrized = false;
    // Measured quantities for the construction bounds.
    double eps = 0.0, delta = 0.0;
    double midpoint_deviation = 0.0;  // |y^-1(z0) - edge midpoint|
    double bilipschitz = 1.0;         // worst of the two affine maps
    double param_M = 1.0;             // M-condition of the traversal parameter
};

// delta = min(eps/5.01, min over interior nodes of the max image
// displacement over the eps-circle). Throws Error("EpsTooSmall") when
// eps < 4h.
double choose_delta(const GridMap& y, double eps);

// Throws Error("GammaUnbounded") when eta(1/gamma) > 1/4 for all
// gamma <= 64.
Partition partition_domain(Rect omega, double eps, const QSReport& eta_table);

// Touching-radius construction on one edge; circles discretized at 256
// points, radius found by bisection to tolerance h/4. Throws
// Error("ClosenessViolated") or Error("RadiusOutOfBounds").
Bridge bridge_edge(const GridMap& y, const GridMap& yk, const GridEdge& edge,
                   double eps, double delta);

// Chord-length equalizing reparametrization, identity near both endpoints
// (lambda = d/4 from the two-sided join). Throws Error("NotQuasicircle")
// when the arc condition constant of the bridge exceeds 50.
Bridge reparametrize_bridge(const Bridge& b);

struct CutoffReport {
    double eps = 0.0, delta = 0.0;
    double sup_y_omega = 0.0;          // sup node-wise |y - omega|
    double sup_inverse = 0.0;          // sampled |y^-1 - omega^-1|
    double bound = 0.0;                // 3 eps + delta
    double modified_measure = 0.0;     // area where yk may differ from omega
    double distortion_sup = 0.0;
    bool boundary_exact = false;       // omega = y on all outer-collar nodes
    bool multiplicity_one = false;     // 100-point sample
    bool ciarlet_necas_ok = false;
    std::size_t bridges = 0;
    std::size_t mid_squares = 0;
};

struct CutoffResult {
    GridMap omega;
    Partition partition;
    std::vector<Bridge> bridge_list;
    CutoffReport report;
};

// The full cut-off: omega = y on the outer collar, yk on the inner cells,
// per-square quasiconformal extension of the bridge-and-trace boundary
// data on the middle ring.
CutoffResult assemble_cutoff(const GridMap& y, const GridMap& yk, double eps);

}  // namespace qcplane
