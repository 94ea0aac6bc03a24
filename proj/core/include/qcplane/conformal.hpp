#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qcplane/curve.hpp"
#include "qcplane/geometry.hpp"
#include "qcplane/grid_map.hpp"

namespace qcplane {

using Cplx = std::complex<double>;

// Complete elliptic integral K(k) via the arithmetic-geometric mean.
double elliptic_K(double k);

// Jacobi sn/cn/dn for real argument, via the AGM phi-recursion.
void jacobi_sncndn(double u, double k, double& sn, double& cn, double& dn);

// sn at a complex argument, from the real functions at moduli k and k'.
Cplx jacobi_sn(Cplx u, double k);

// The modulus with K(k')/K(k) = 2, so sn maps [-K,K] x [0,K'] conformally
// onto the upper half-plane with a 2:1 side ratio (a unit square).
double square_modulus();

// Conformal map of the unit square onto the upper half-plane:
//   z = (x,y) |-> sn(2K(x - 1/2) + i 2K y, k).
// Bottom-edge midpoint -> 0, bottom corners -> +-1, top corners -> +-1/k,
// top-edge midpoint -> infinity (the seam). Nodes whose image leaves
// [-4,4] x [0,4] are marked missing.
Cplx square_to_halfplane_point(Vec2 z);
GridMap square_to_halfplane(std::size_t resolution);

}  // namespace qcplane
