#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qcplane/geometry.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/grid_map.hpp"

namespace qcplane {

// Triangulated image of a GridMap: each defined cell split into two
// triangles, with the domain-side preimage kept per vertex. A uniform
// bucket grid over the image bounding box accelerates point location.
class ImageMesh {
  public:
    explicit ImageMesh(const GridMap& m);

    struct Hit {
        std::size_t tri;
        Vec2 preimage;   // barycentric pull-back to the domain
        double orient;   // signed doubled area of the triangle
    };

    // All triangles containing p (inclusive of edges).
    std::vector<Hit> locate_all(Vec2 p) const;
    // First containing triangle, preferring positively oriented ones.
    std::optional<Hit> locate(Vec2 p) const;

    Rect bbox() const { return bbox_; }
    std::size_t triangle_count() const { return tris_.size() / 3; }

    // Area of the union of image triangles, overlaps counted once;
    // rasterized at pixel size `pixel`.
    double union_area(double pixel) const;

    // Sum of orientation signs of triangles covering p.
    int covering_degree(Vec2 p) const;

  private:
    std::vector<Vec2> img_;   // 3 per triangle
    std::vector<Vec2> dom_;   // matching preimages
    std::vector<std::size_t> tris_;  // flat index list, 3 per triangle
    Rect bbox_;
    // bucket grid
    double cell_ = 0.0;
    std::size_t bx_ = 0, by_ = 0;
    std::vector<std::vector<std::size_t>> buckets_;

    void bucket_of(Vec2 p, std::size_t& i, std::size_t& j) const;
};

struct CiarletNecasReport {
    double lhs = 0.0;  // midpoint quadrature of det(grad)
    double rhs = 0.0;  // image area, overlaps counted once
    bool satisfied = false;
    double tol = 0.0;
};

// invert: map sampled on a lattice over the image bounding box, defined by
// point location in the triangulated image mesh. Throws
// Error("NonInjective") when the node sample is not injective. Nodes
// outside the image are marked missing.
GridMap invert(const GridMap& m);
GridMap invert(const GridMap& m, double out_spacing);

// compose: node-wise evaluation outer(inner(x)) by bilinear interpolation.
// Throws Error("DomainMismatch") when an image node leaves outer's domain
// by more than one spacing.
GridMap compose(const GridMap& outer, const GridMap& inner);

// N(u, Omega, p): orientation-weighted count of image triangles covering p.
// Throws Error("NearBoundary") if p is within one spacing of the image of
// the domain boundary.
int multiplicity(const GridMap& m, Vec2 p);

CiarletNecasReport ciarlet_necas(const GridMap& m);

// A cell-aligned subdomain given by the inclusive cell index box.
struct CellBox {
    std::size_t i0, j0, i1, j1;  // cells [i0,i1] x [j0,j1]
};

// Piecewise redefinition of `base` on disjoint cell boxes. Each piece is a
// GridMap over exactly its box (same spacing) and must agree with base on
// the box boundary nodes to 1e-9. Throws Error("BoundaryMismatch") or
// Error("OverlappingSubdomains").
GridMap glue(const GridMap& base, const std::vector<std::pair<CellBox, GridMap>>& pieces);

}  // namespace qcplane
