#include "qcplane/beurling.hpp"

#include <algorithm>
#include <cmath>

namespace qcplane {

LineHomeo::LineHomeo(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size())
        throw Error("NotIncreasing", "line homeomorphism needs at least two samples");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i] > xs_[i - 1]) || !(ys_[i] > ys_[i - 1]))
            throw Error("NotIncreasing", "line homeomorphism table must increase");
    cum_.resize(xs_.size(), 0.0);
    for (std::size_t i = 1; i < xs_.size(); ++i)
        cum_[i] = cum_[i - 1] + 0.5 * (ys_[i] + ys_[i - 1]) * (xs_[i] - xs_[i - 1]);
}

LineHomeo::LineHomeo(const Homeo1D& h) : LineHomeo(h.breakpoints(), h.values()) {}

double LineHomeo::operator()(double x) const {
    if (x <= xs_.front()) {
        double s = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
        return ys_.front() + s * (x - xs_.front());
    }
    if (x >= xs_.back()) {
        std::size_t n = xs_.size();
        double s = (ys_[n - 1] - ys_[n - 2]) / (xs_[n - 1] - xs_[n - 2]);
        return ys_.back() + s * (x - xs_.back());
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t k = std::size_t(it - xs_.begin()) - 1;
    double w = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
    return ys_[k] + w * (ys_[k + 1] - ys_[k]);
}

double LineHomeo::antiderivative(double x) const {
    if (x <= xs_.front()) {
        double dx = x - xs_.front();
        return 0.5 * ((*this)(x) + ys_.front()) * dx;  // negative for x below
    }
    if (x >= xs_.back()) {
        double dx = x - xs_.back();
        return cum_.back() + 0.5 * ((*this)(x) + ys_.back()) * dx;
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t k = std::size_t(it - xs_.begin()) - 1;
    return cum_[k] + 0.5 * ((*this)(x) + ys_[k]) * (x - xs_[k]);
}

double LineHomeo::integral(double u, double v) const {
    return antiderivative(v) - antiderivative(u);
}

Vec2 beurling_ahlfors_point(const LineHomeo& h, Vec2 p) {
    double x = p.x, y = p.y;
    if (y == 0.0) return {h(x), 0.0};
    double right = h.integral(x, x + y) / y;  // int_0^1 h(x+ty) dt
    double left = h.integral(x - y, x) / y;   // int_0^1 h(x-ty) dt
    return {0.5 * (right + left), 0.5 * (right - left)};
}

GridMap beurling_ahlfors(const Homeo1D& h, std::size_t resolution) {
    QSReport qs = m_condition(h);
    if (qs.M > 1e6)
        throw Error("ModulusUnbounded",
                    "M-condition constant " + std::to_string(qs.M) + " exceeds 1e6");
    LineHomeo line(h);
    double a = h.a();
    double spacing = a / double(resolution);
    GridMap m(Rect{0.0, 0.0, a, 0.5 * a}, spacing);
    for (std::size_t j = 0; j < m.ny(); ++j)
        for (std::size_t i = 0; i < m.nx(); ++i)
            m.set(i, j, beurling_ahlfors_point(line, m.node_pos(i, j)));
    m.set_analytic_tag("beurling_ahlfors");
    return m;
}

}  // namespace qcplane
