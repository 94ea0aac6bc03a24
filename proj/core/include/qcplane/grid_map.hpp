#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcplane/geometry.hpp"

namespace qcplane {

// A planar map sampled on a uniform square lattice over a rectangle.
// Node (i,j) sits at (x0 + i*h, y0 + j*h); values are stored row-major
// (j outer, i inner). Nodes may be marked missing (e.g. by inversion when
// a lattice point falls outside the image); missing nodes carry no value.
class GridMap {
  public:
    GridMap() = default;
    GridMap(Rect domain, double spacing);

    static GridMap sample(Rect domain, double spacing,
                          const std::function<Vec2(Vec2)>& f,
                          std::string analytic_tag = {});

    const Rect& domain() const { return domain_; }
    double spacing() const { return spacing_; }
    std::size_t nx() const { return nx_; }  // nodes per row
    std::size_t ny() const { return ny_; }
    std::size_t cells_x() const { return nx_ - 1; }
    std::size_t cells_y() const { return ny_ - 1; }

    Vec2 node_pos(std::size_t i, std::size_t j) const {
        return {domain_.x0 + static_cast<double>(i) * spacing_,
                domain_.y0 + static_cast<double>(j) * spacing_};
    }
    Vec2 cell_center(std::size_t i, std::size_t j) const {
        return {domain_.x0 + (static_cast<double>(i) + 0.5) * spacing_,
                domain_.y0 + (static_cast<double>(j) + 0.5) * spacing_};
    }

    Vec2& value(std::size_t i, std::size_t j) { return values_[j * nx_ + i]; }
    Vec2 value(std::size_t i, std::size_t j) const { return values_[j * nx_ + i]; }
    bool defined(std::size_t i, std::size_t j) const { return defined_[j * nx_ + i]; }
    void set(std::size_t i, std::size_t j, Vec2 v) {
        values_[j * nx_ + i] = v;
        defined_[j * nx_ + i] = true;
    }
    void mark_missing(std::size_t i, std::size_t j) { defined_[j * nx_ + i] = false; }
    bool fully_defined() const;

    // All four corner nodes of cell (i,j) defined.
    bool cell_defined(std::size_t i, std::size_t j) const;

    // Bilinear interpolation at p; p is clamped to the domain if it lies
    // within `tol` outside, otherwise throws Error("OutsideDomain").
    Vec2 eval(Vec2 p, double tol = 0.0) const;

    const std::string& analytic_tag() const { return tag_; }
    void set_analytic_tag(std::string tag) { tag_ = std::move(tag); }

    const std::vector<Vec2>& raw_values() const { return values_; }

    // Throws Error("InvalidGridMap") on violation: finite values, h > 0
    // dividing the sides, at least 3 nodes per side.
    void validate() const;

    double max_node_distance(const GridMap& other) const;

  private:
    Rect domain_;
    double spacing_ = 0.0;
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<Vec2> values_;
    std::vector<char> defined_;
    std::string tag_;
};

}  // namespace qcplane
