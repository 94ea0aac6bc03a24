#include "qcplane/grid_map.hpp"

#include <algorithm>
#include <cmath>

namespace qcplane {

namespace {

std::size_t side_nodes(double len, double h) {
    double n = len / h;
    double r = std::round(n);
    if (r < 2.0 || std::abs(n - r) > 1e-9 * std::max(1.0, n))
        throw Error("InvalidGridMap", "spacing does not divide side length");
    return static_cast<std::size_t>(r) + 1;
}

}  // namespace

GridMap::GridMap(Rect domain, double spacing) : domain_(domain), spacing_(spacing) {
    if (!(spacing > 0.0)) throw Error("InvalidGridMap", "spacing must be positive");
    nx_ = side_nodes(domain.w, spacing);
    ny_ = side_nodes(domain.h, spacing);
    if (nx_ < 3 || ny_ < 3)
        throw Error("InvalidGridMap", "lattice needs at least 3 nodes per side");
    values_.assign(nx_ * ny_, Vec2{});
    defined_.assign(nx_ * ny_, 0);
}

GridMap GridMap::sample(Rect domain, double spacing,
                        const std::function<Vec2(Vec2)>& f, std::string analytic_tag) {
    GridMap m(domain, spacing);
    for (std::size_t j = 0; j < m.ny_; ++j)
        for (std::size_t i = 0; i < m.nx_; ++i) m.set(i, j, f(m.node_pos(i, j)));
    m.tag_ = std::move(analytic_tag);
    m.validate();
    return m;
}

bool GridMap::fully_defined() const {
    return std::all_of(defined_.begin(), defined_.end(), [](char c) { return c != 0; });
}

bool GridMap::cell_defined(std::size_t i, std::size_t j) const {
    return defined(i, j) && defined(i + 1, j) && defined(i, j + 1) && defined(i + 1, j + 1);
}

Vec2 GridMap::eval(Vec2 p, double tol) const {
    double fx = (p.x - domain_.x0) / spacing_;
    double fy = (p.y - domain_.y0) / spacing_;
    double tn = tol / spacing_;
    if (fx < -tn || fy < -tn || fx > double(nx_ - 1) + tn || fy > double(ny_ - 1) + tn)
        throw Error("OutsideDomain", "evaluation point outside grid domain");
    fx = std::clamp(fx, 0.0, double(nx_ - 1));
    fy = std::clamp(fy, 0.0, double(ny_ - 1));
    std::size_t i = std::min(static_cast<std::size_t>(fx), nx_ - 2);
    std::size_t j = std::min(static_cast<std::size_t>(fy), ny_ - 2);
    double u = fx - double(i), v = fy - double(j);
    if (!cell_defined(i, j))
        throw Error("OutsideImage", "evaluation in a cell with missing values");
    Vec2 v00 = value(i, j), v10 = value(i + 1, j);
    Vec2 v01 = value(i, j + 1), v11 = value(i + 1, j + 1);
    return v00 * ((1 - u) * (1 - v)) + v10 * (u * (1 - v)) + v01 * ((1 - u) * v) +
           v11 * (u * v);
}

void GridMap::validate() const {
    if (!(spacing_ > 0.0)) throw Error("InvalidGridMap", "spacing must be positive");
    if (nx_ < 3 || ny_ < 3)
        throw Error("InvalidGridMap", "lattice needs at least 3 nodes per side");
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (defined_[k] && !values_[k].finite())
            throw Error("InvalidGridMap", "non-finite sampled value");
}

double GridMap::max_node_distance(const GridMap& other) const {
    if (nx_ != other.nx_ || ny_ != other.ny_)
        throw Error("DomainMismatch", "grids have different lattices");
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (defined_[k] && other.defined_[k])
            m = std::max(m, (values_[k] - other.values_[k]).norm());
    return m;
}

}  // namespace qcplane
