#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcplane/extension.hpp"
#include "qcplane/geometry.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/grid_map.hpp"

namespace qcplane {

// An energy density A |-> v(A) with its growth certificate
// 0 <= v(A) <= C (1 + |A|^p + |det A|^-q) and a convexity tag. The tag is
// a certificate supplied with the density, not something decided here.
struct EnergyDensitySpec {
    enum class Tag { Convex, Polyconvex, NullLagrangian, Custom };

    std::string name;
    std::function<double(const Mat2&)> eval;
    double C = 1.0, p = 2.0, q = 0.0;
    Tag tag = Tag::Custom;
    bool blows_up_at_degenerate = false;

    double operator()(const Mat2& A) const { return eval(A); }
};

// Registry: "dirichlet" (spectral |A|^2), "det", "neg-det",
// "elastic-pq" (|A|^p + det^-q), "bump" (-|A - center|^2, a concave well).
EnergyDensitySpec density_by_name(const std::string& name, double p = 2.0,
                                  double q = 0.5, const Mat2& center = Mat2::identity());

// Midpoint quadrature of v over the cells; +infinity as soon as a cell has
// det <= 0 and the density blows up at degenerate matrices.
double energy(const GridMap& y, const EnergyDensitySpec& v);

// energy + eps_pen * (distortion sup); +infinity when any cell degenerates.
double penalized_energy(const GridMap& y, const EnergyDensitySpec& v, double eps_pen);

struct LscReport {
    std::vector<double> J_seq;
    double liminf_seq = 0.0;  // min over the tail half of the sequence
    double J_limit = 0.0;
    bool satisfied = false;
    double tol = 0.0;
};

LscReport lsc_experiment(const EnergyDensitySpec& v, const std::vector<GridMap>& seq,
                         const GridMap& limit);

struct EquiintegrabilityProfile {
    std::vector<double> thresholds;  // M
    std::vector<double> sup_tails;   // sup_k of the tail quadrature above M
};

// tail_k(M) = integral of |grad y_k|^p over cells where it exceeds M, plus
// the det^-q tail when q > 0; the profile is nonincreasing in M.
EquiintegrabilityProfile equiintegrability_profile(const std::vector<GridMap>& seq,
                                                   double p, double q);

struct MinimizeOptions {
    std::size_t max_sweeps = 32;
    double det_floor = 1e-6;
};

struct MinimizeResult {
    GridMap map;
    std::vector<double> J_trace;  // value after each sweep, monotone
    std::size_t accepted_moves = 0;
};

// Deterministic coordinate descent: row-major sweep over interior nodes,
// step halving h/2 .. h/64 in the four axis directions; a move is accepted
// iff J strictly decreases and no incident cell determinant falls below
// the floor. Throws Error("InfeasibleInit") when init has a degenerate
// cell or does not match the boundary data at boundary nodes.
MinimizeResult minimize_penalized(const EnergyDensitySpec& v, double eps_pen,
                                  const BoundaryMap& boundary, const GridMap& init,
                                  const MinimizeOptions& opts = {});

}  // namespace qcplane
