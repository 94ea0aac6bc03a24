#pragma once

#include <cstddef>
#include <vector>

#include "qcplane/geometry.hpp"

namespace qcplane {

// A sampled strictly increasing homeomorphism of [0,a] onto [0,b],
// piecewise linear between breakpoints, endpoints pinned exactly.
class Homeo1D {
  public:
    Homeo1D() = default;
    Homeo1D(std::vector<double> breakpoints, std::vector<double> values);

    static Homeo1D identity(double a = 1.0);
    static Homeo1D from_function(double a, double b, std::size_t segments,
                                 double (*f)(double));

    double a() const { return t_.back(); }
    double b() const { return s_.back(); }
    const std::vector<double>& breakpoints() const { return t_; }
    const std::vector<double>& values() const { return s_; }
    std::size_t size() const { return t_.size(); }

    double operator()(double t) const;       // piecewise-linear evaluation
    double inverse(double s) const;          // inverse homeomorphism value
    double slope(std::size_t seg) const;     // segment derivative

    // Exact integral of the piecewise-linear interpolant over [0, t].
    double integral(double t) const;

    // Affine rescaling t -> b^{-1} s(a t) onto [0,1] -> [0,1].
    Homeo1D normalized() const;
    // Push [0,1]->[0,1] data back onto [0,a]->[0,b].
    Homeo1D denormalized(double a, double b) const;

    // Throws Error("NotIncreasing") when values fail to increase strictly.
    void validate() const;

  private:
    std::vector<double> t_, s_;
};

struct QSWitness {
    double t = 0.0, h = 0.0, ratio = 0.0;
};

struct QSReport {
    double M = 1.0;                      // best symmetric-ratio constant found
    std::vector<double> eta_args;        // sampled t
    std::vector<double> eta_vals;        // eta(t), nondecreasing
    std::vector<QSWitness> witnesses;    // worst triples, largest ratio first

    double eta(double t) const;          // table lookup with interpolation
};

// Exhaustive symmetric-ratio scan over a dyadic grid with 2^grid_density
// points; eta estimated from asymmetric triples (x, x+h, x+t*h).
QSReport m_condition(const Homeo1D& s, unsigned grid_density = 8);

// The explicit fitting reparametrization: equals s on [0,a/4], affine with
// slope b/a on [3a/4,a], total image length below (3/2)b.
Homeo1D fit_1d(const Homeo1D& s);

// Two-sided join: output equals r near 0, s near a, monotone throughout.
// Throws Error("NoValidD") when no dyadic d in (0,1/4] has eta(d) <= 1/4.
Homeo1D reparam_join(const Homeo1D& r, const Homeo1D& s);

struct BiHolderReport {
    double kappa1 = 1.0;  // smallest lower exponent
    double kappa2 = 1.0;  // largest upper exponent
    bool passes = false;
};

BiHolderReport bi_holder_check(const Homeo1D& s);

}  // namespace qcplane
