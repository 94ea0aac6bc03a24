#include "qcplane/gradient.hpp"

#include <algorithm>
#include <cmath>

namespace qcplane {

GradientField gradient_field(const GridMap& m) {
    m.validate();
    GradientField g(m.domain(), m.spacing(), m.cells_x(), m.cells_y());
    double h = m.spacing();
    for (std::size_t j = 0; j < m.cells_y(); ++j) {
        for (std::size_t i = 0; i < m.cells_x(); ++i) {
            if (!m.cell_defined(i, j)) continue;
            Vec2 v00 = m.value(i, j), v10 = m.value(i + 1, j);
            Vec2 v01 = m.value(i, j + 1), v11 = m.value(i + 1, j + 1);
            Vec2 dx = ((v10 + v11) - (v00 + v01)) / (2.0 * h);
            Vec2 dy = ((v01 + v11) - (v00 + v10)) / (2.0 * h);
            g.set(i, j, Mat2{dx.x, dy.x, dx.y, dy.y});
        }
    }
    return g;
}

DistortionReport distortion(const GradientField& g) {
    DistortionReport r;
    std::size_t total = 0, degenerate = 0;
    for (std::size_t j = 0; j < g.cells_y(); ++j) {
        for (std::size_t i = 0; i < g.cells_x(); ++i) {
            if (!g.defined(i, j)) continue;
            ++total;
            const Mat2& a = g.at(i, j);
            DistortionCell c{i, j, distortion_of(a), a.det()};
            if (c.det > 0.0) {
                r.sup = std::max(r.sup, c.distortion);
                ++r.positive_cells;
            } else {
                ++degenerate;
            }
            r.cells.push_back(c);
        }
    }
    r.degenerate_fraction = total ? double(degenerate) / double(total) : 0.0;
    return r;
}

}  // namespace qcplane
