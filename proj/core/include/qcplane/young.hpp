#pragma once

#include <cstddef>
#include <vector>

#include "qcplane/energy.hpp"
#include "qcplane/geometry.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/grid_map.hpp"

namespace qcplane {

// The cone of K-quasiconformal matrices: |A|^2 <= K det A (spectral norm).
struct QCMatrixCone {
    double K = 1.0;

    bool contains(const Mat2& A, double tol = 1e-9) const {
        double dt = A.det();
        if (dt <= 0.0) return false;
        double s = spectral_norm(A);
        return s * s <= K * dt * (1.0 + tol);
    }
};

struct Atom {
    Mat2 m;
    double w = 0.0;
};

// Per-cell weighted atoms in matrix space, estimated from gradients on a
// coarse lattice over the parent domain.
class EmpiricalYoungMeasure {
  public:
    EmpiricalYoungMeasure() = default;
    EmpiricalYoungMeasure(Rect domain, double cell_size, std::size_t cx, std::size_t cy)
        : domain_(domain), cell_(cell_size), cx_(cx), cy_(cy), atoms_(cx * cy) {}

    std::size_t cells_x() const { return cx_; }
    std::size_t cells_y() const { return cy_; }
    double cell_size() const { return cell_; }
    const Rect& domain() const { return domain_; }

    const std::vector<Atom>& atoms(std::size_t i, std::size_t j) const {
        return atoms_[j * cx_ + i];
    }
    std::vector<Atom>& atoms(std::size_t i, std::size_t j) { return atoms_[j * cx_ + i]; }

    Mat2 first_moment(std::size_t i, std::size_t j) const;
    double pair(std::size_t i, std::size_t j,
                const std::function<double(const Mat2&)>& v) const;

    // Weights nonnegative and summing to 1 within 1e-9 per nonempty cell.
    void validate() const;

  private:
    Rect domain_;
    double cell_ = 0.0;
    std::size_t cx_ = 0, cy_ = 0;
    std::vector<std::vector<Atom>> atoms_;
};

// Piecewise-affine laminate between rank-one connected gradients A and B,
// lambda-fraction A, oscillating k times across the domain. The volume
// fraction is snapped to the cell lattice (within 0.005 of lambda) so the
// per-cell gradient census is exact. Throws Error("NotRankOne") or
// Error("OutsideCone").
std::vector<GridMap> laminate_sequence(const Mat2& A, const Mat2& B, double lambda,
                                       const std::vector<std::size_t>& ks, Rect omega);
GridMap laminate_map(const Mat2& A, const Mat2& B, double lambda, std::size_t k,
                     Rect omega);

// Histogram of the last member's gradients per coarse cell (coarsening x
// coarsening fine cells), atoms merged at tolerance 1e-6 and ordered
// lexicographically by entries.
EmpiricalYoungMeasure empirical_measure(const std::vector<GridMap>& seq,
                                        std::size_t coarsening = 4);

struct SupportReport {
    double fraction_inside = 0.0;  // by weight
    Atom worst_atom;
    double worst_excess = 0.0;  // |A|^2/det - K of the worst atom
    std::size_t skipped_cells = 0;
};

SupportReport support_check(const EmpiricalYoungMeasure& m, double K);

struct MomentReport {
    GradientField moments;  // coarse lattice of first moments
    double sup_deviation = 0.0;
};

// First-moment field compared against the block average of grad(reference).
MomentReport moment_field(const EmpiricalYoungMeasure& m, const GridMap& reference);

struct JensenReport {
    std::size_t cells_checked = 0;
    std::size_t violations = 0;
    std::vector<double> margins;  // pairing minus v(moment-side gradient)
    double tol = 0.0;
    bool equality_throughout = true;  // |margin| <= 1e-3 scale everywhere
};

// Checks v(grad u(x)) <= <nu_x, v> per coarse cell, u from `y`. Throws
// Error("DensityUndefined") when the density blows up on a degenerate atom.
JensenReport jensen_check(const EmpiricalYoungMeasure& m, const EnergyDensitySpec& v,
                          const GridMap& y);

struct KPReport {
    double moment_deviation = 0.0;
    bool first_moment_ok = false;
    bool jensen_ok = false;
    double second_moment = 0.0;  // integral of <nu_x, |A|^2>
    bool second_moment_ok = false;
    bool all_ok = false;
};

KPReport kp_report(const EmpiricalYoungMeasure& m, const GridMap& y,
                   const std::vector<EnergyDensitySpec>& suite);

}  // namespace qcplane
