#pragma once

#include <cstddef>
#include <vector>

#include "qcplane/geometry.hpp"
#include "qcplane/grid_map.hpp"

namespace qcplane {

// One 2x2 matrix per cell of the parent lattice; gradients live at cell
// centers. Cells whose corner values are partly missing are undefined.
class GradientField {
  public:
    GradientField() = default;
    GradientField(Rect domain, double spacing, std::size_t cx, std::size_t cy)
        : domain_(domain), spacing_(spacing), cx_(cx), cy_(cy),
          mats_(cx * cy), defined_(cx * cy, 0) {}

    std::size_t cells_x() const { return cx_; }
    std::size_t cells_y() const { return cy_; }
    double spacing() const { return spacing_; }
    const Rect& domain() const { return domain_; }

    Vec2 cell_center(std::size_t i, std::size_t j) const {
        return {domain_.x0 + (double(i) + 0.5) * spacing_,
                domain_.y0 + (double(j) + 0.5) * spacing_};
    }

    const Mat2& at(std::size_t i, std::size_t j) const { return mats_[j * cx_ + i]; }
    bool defined(std::size_t i, std::size_t j) const { return defined_[j * cx_ + i]; }
    void set(std::size_t i, std::size_t j, const Mat2& m) {
        mats_[j * cx_ + i] = m;
        defined_[j * cx_ + i] = 1;
    }

  private:
    Rect domain_;
    double spacing_ = 0.0;
    std::size_t cx_ = 0, cy_ = 0;
    std::vector<Mat2> mats_;
    std::vector<char> defined_;
};

struct DistortionCell {
    std::size_t i = 0, j = 0;
    double distortion = 0.0;  // infinity when det <= 0
    double det = 0.0;
};

struct DistortionReport {
    std::vector<DistortionCell> cells;
    double sup = 0.0;                 // over positive-determinant cells
    double degenerate_fraction = 0.0; // cells with det <= 0
    std::size_t positive_cells = 0;
};

// Per-cell gradient from the corner node values: the difference quotient of
// opposite edge midlines. Exact for affine maps, O(h^2) at cell centers.
GradientField gradient_field(const GridMap& m);

DistortionReport distortion(const GradientField& g);

}  // namespace qcplane
