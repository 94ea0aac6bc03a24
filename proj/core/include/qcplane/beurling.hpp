#pragma once

#include <cstddef>
#include <vector>

#include "qcplane/geometry.hpp"
#include "qcplane/grid_map.hpp"
#include "qcplane/homeo1d.hpp"

namespace qcplane {

// An increasing homeomorphism of the real line: piecewise linear on a
// breakpoint table, extended affinely beyond it with the end slopes.
// Carries exact antiderivatives so the averaging extension needs no
// numerical quadrature.
class LineHomeo {
  public:
    LineHomeo(std::vector<double> xs, std::vector<double> ys);
    explicit LineHomeo(const Homeo1D& h);  // extend h beyond [0,a] affinely

    double operator()(double x) const;
    // Exact integral of the interpolant over [u, v].
    double integral(double u, double v) const;

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

  private:
    std::vector<double> xs_, ys_, cum_;  // cum_[i] = integral from xs_[0]
    double antiderivative(double x) const;
};

// Beurling-Ahlfors averaging extension of a line homeomorphism to the
// upper half-plane:
//   F(x,y) = (alpha, beta),
//   alpha = 1/2 int_0^1 h(x+ty) + h(x-ty) dt,
//   beta  = 1/2 int_0^1 h(x+ty) - h(x-ty) dt,
// evaluated in closed form segment by segment. F(x,0) = (h(x),0).
Vec2 beurling_ahlfors_point(const LineHomeo& h, Vec2 p);

// Sampled on [0,a] x [0,a/2] with `resolution` cells along x. Throws
// Error("ModulusUnbounded") when the M-condition constant exceeds 1e6.
GridMap beurling_ahlfors(const Homeo1D& h, std::size_t resolution = 64);

}  // namespace qcplane
