#include "qcplane/curve.hpp"

#include <algorithm>
#include <cmath>

namespace qcplane {

double PlanarCurve::length() const {
    double l = 0.0;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        l += (vertices[i + 1] - vertices[i]).norm();
    if (closed && vertices.size() > 1) l += (vertices.front() - vertices.back()).norm();
    return l;
}

std::vector<double> PlanarCurve::arc_lengths() const {
    std::vector<double> s(vertices.size(), 0.0);
    for (std::size_t i = 1; i < vertices.size(); ++i)
        s[i] = s[i - 1] + (vertices[i] - vertices[i - 1]).norm();
    return s;
}

Vec2 PlanarCurve::at_arclength(double s) const {
    auto cum = arc_lengths();
    double total = length();
    if (closed) {
        s = std::fmod(s, total);
        if (s < 0.0) s += total;
    } else {
        s = std::clamp(s, 0.0, cum.back());
    }
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t k = it == cum.begin() ? 0 : std::size_t(it - cum.begin()) - 1;
    Vec2 a = vertices[k];
    Vec2 b = (k + 1 < vertices.size()) ? vertices[k + 1] : vertices.front();
    double seg = (b - a).norm();
    if (seg == 0.0) return a;
    return a + (b - a) * ((s - cum[k]) / seg);
}

namespace {

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double d1 = (b - a).cross(c - a);
    double d2 = (b - a).cross(d - a);
    double d3 = (d - c).cross(a - c);
    double d4 = (d - c).cross(b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

void PlanarCurve::validate() const {
    if (vertices.size() < 2) throw Error("NotSimple", "curve needs at least two vertices");
    std::size_t n = vertices.size();
    std::size_t nseg = closed ? n : n - 1;
    for (std::size_t i = 0; i < nseg; ++i) {
        if ((vertices[(i + 1) % n] - vertices[i]).norm() == 0.0)
            throw Error("NotSimple", "duplicate consecutive vertices at " + std::to_string(i));
    }
    if (!closed) return;
    // Proper crossings only; shared endpoints of adjacent segments are fine.
    for (std::size_t i = 0; i < nseg; ++i) {
        for (std::size_t j = i + 2; j < nseg; ++j) {
            if (i == 0 && j == nseg - 1) continue;  // adjacent around the seam
            if (segments_cross(vertices[i], vertices[(i + 1) % n],
                               vertices[j], vertices[(j + 1) % n]))
                throw Error("NotSimple", "segments " + std::to_string(i) + " and " +
                                             std::to_string(j) + " cross");
        }
    }
}

QuasicircleReport quasicircle_constant(const PlanarCurve& c) {
    if (!c.closed) throw Error("NotSimple", "arc condition needs a closed curve");
    c.validate();
    const auto& v = c.vertices;
    const std::size_t n = v.size();
    auto cum = c.arc_lengths();
    const double total = c.length();

    QuasicircleReport rep;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double chord = (v[j] - v[i]).norm();
            if (chord == 0.0) continue;
            double fwd = cum[j] - cum[i];          // arc i -> j through increasing index
            bool shorter_is_fwd = fwd <= total - fwd;
            std::size_t k = shorter_is_fwd ? i + 1 : (j + 1) % n;
            std::size_t end = shorter_is_fwd ? j : i;
            for (; k != end; k = (k + 1) % n) {
                double ratio = ((v[i] - v[k]).norm() + (v[j] - v[k]).norm()) / chord;
                if (ratio > rep.c_best) {
                    rep.c_best = ratio;
                    rep.witness = {v[i], v[j], v[k], ratio};
                }
            }
        }
    }
    return rep;
}

PlanarCurve circle_curve(Vec2 center, double radius, std::size_t samples) {
    PlanarCurve c;
    c.closed = true;
    c.vertices.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        double th = 2.0 * M_PI * double(k) / double(samples);
        c.vertices.push_back(center + Vec2{radius * std::cos(th), radius * std::sin(th)});
    }
    return c;
}

PlanarCurve square_curve(Rect r, std::size_t m) {
    PlanarCurve c;
    c.closed = true;
    Vec2 p00 = r.lo(), p10{r.x0 + r.w, r.y0}, p11 = r.hi(), p01{r.x0, r.y0 + r.h};
    auto edge = [&](Vec2 a, Vec2 b) {
        for (std::size_t k = 0; k < m; ++k)
            c.vertices.push_back(a + (b - a) * (double(k) / double(m)));
    };
    edge(p00, p10);
    edge(p10, p11);
    edge(p11, p01);
    edge(p01, p00);
    return c;
}

PlanarCurve cusp_curve(std::size_t samples) {
    // Two branches x = +-y^3 meeting at the origin with a common vertical
    // tangent: a genuine zero-angle cusp, so the arc-condition constant
    // blows up as the sampling refines toward the tip.
    PlanarCurve c;
    c.closed = true;
    std::size_t m = samples / 2;
    for (std::size_t k = 0; k <= 2 * m; ++k) {
        double t = -1.0 + double(k) / double(m);  // -1 .. 1
        c.vertices.push_back({t * t * t, std::abs(t)});
    }
    // Close around the top through a rectangle well away from the cusp.
    c.vertices.push_back({1.0, 2.0});
    c.vertices.push_back({-1.0, 2.0});
    return c;
}

}  // namespace qcplane
