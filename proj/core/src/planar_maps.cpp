#include "qcplane/planar_maps.hpp"

#include <algorithm>
#include <cmath>

namespace qcplane {

namespace {

// Barycentric coordinates of p w.r.t. triangle (a,b,c). Returns true when p
// lies inside (with slack `tol` relative to the doubled area).
bool barycentric(Vec2 a, Vec2 b, Vec2 c, Vec2 p, double& l0, double& l1, double& l2,
                 double& area2, double tol) {
    area2 = (b - a).cross(c - a);
    if (area2 == 0.0) return false;
    double w0 = (b - p).cross(c - p);
    double w1 = (c - p).cross(a - p);
    double w2 = (a - p).cross(b - p);
    double inv = 1.0 / area2;
    l0 = w0 * inv;
    l1 = w1 * inv;
    l2 = w2 * inv;
    return l0 >= -tol && l1 >= -tol && l2 >= -tol;
}

}  // namespace

ImageMesh::ImageMesh(const GridMap& m) {
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_y;
    for (std::size_t j = 0; j < m.cells_y(); ++j) {
        for (std::size_t i = 0; i < m.cells_x(); ++i) {
            if (!m.cell_defined(i, j)) continue;
            Vec2 p00 = m.node_pos(i, j), p10 = m.node_pos(i + 1, j);
            Vec2 p01 = m.node_pos(i, j + 1), p11 = m.node_pos(i + 1, j + 1);
            Vec2 v00 = m.value(i, j), v10 = m.value(i + 1, j);
            Vec2 v01 = m.value(i, j + 1), v11 = m.value(i + 1, j + 1);
            auto push = [&](Vec2 ia, Vec2 ib, Vec2 ic, Vec2 da, Vec2 db, Vec2 dc) {
                std::size_t base = img_.size();
                img_.insert(img_.end(), {ia, ib, ic});
                dom_.insert(dom_.end(), {da, db, dc});
                tris_.insert(tris_.end(), {base, base + 1, base + 2});
            };
            push(v00, v10, v11, p00, p10, p11);
            push(v00, v11, v01, p00, p11, p01);
            for (Vec2 v : {v00, v10, v01, v11}) {
                lo_x = std::min(lo_x, v.x);
                lo_y = std::min(lo_y, v.y);
                hi_x = std::max(hi_x, v.x);
                hi_y = std::max(hi_y, v.y);
            }
        }
    }
    if (img_.empty()) throw Error("InvalidGridMap", "no defined cells to triangulate");
    bbox_ = Rect{lo_x, lo_y, std::max(hi_x - lo_x, 1e-300), std::max(hi_y - lo_y, 1e-300)};

    std::size_t ntri = triangle_count();
    std::size_t target = std::max<std::size_t>(1, (std::size_t)std::sqrt((double)ntri));
    bx_ = by_ = target;
    cell_ = std::max(bbox_.w / double(bx_), bbox_.h / double(by_));
    bx_ = std::max<std::size_t>(1, (std::size_t)std::ceil(bbox_.w / cell_));
    by_ = std::max<std::size_t>(1, (std::size_t)std::ceil(bbox_.h / cell_));
    buckets_.assign(bx_ * by_, {});
    for (std::size_t t = 0; t < ntri; ++t) {
        Vec2 a = img_[3 * t], b = img_[3 * t + 1], c = img_[3 * t + 2];
        double tx0 = std::min({a.x, b.x, c.x}), tx1 = std::max({a.x, b.x, c.x});
        double ty0 = std::min({a.y, b.y, c.y}), ty1 = std::max({a.y, b.y, c.y});
        auto clampi = [](long v, long hi) { return std::min(std::max(v, 0L), hi); };
        long i0 = clampi((long)((tx0 - bbox_.x0) / cell_), (long)bx_ - 1);
        long i1 = clampi((long)((tx1 - bbox_.x0) / cell_), (long)bx_ - 1);
        long j0 = clampi((long)((ty0 - bbox_.y0) / cell_), (long)by_ - 1);
        long j1 = clampi((long)((ty1 - bbox_.y0) / cell_), (long)by_ - 1);
        for (long j = j0; j <= j1; ++j)
            for (long i = i0; i <= i1; ++i)
                buckets_[(std::size_t)j * bx_ + (std::size_t)i].push_back(t);
    }
}

void ImageMesh::bucket_of(Vec2 p, std::size_t& i, std::size_t& j) const {
    auto clampi = [](long v, long hi) { return std::min(std::max(v, 0L), hi); };
    i = (std::size_t)clampi((long)((p.x - bbox_.x0) / cell_), (long)bx_ - 1);
    j = (std::size_t)clampi((long)((p.y - bbox_.y0) / cell_), (long)by_ - 1);
}

std::vector<ImageMesh::Hit> ImageMesh::locate_all(Vec2 p) const {
    std::vector<Hit> hits;
    if (!bbox_.contains(p)) return hits;
    std::size_t bi, bj;
    bucket_of(p, bi, bj);
    for (std::size_t t : buckets_[bj * bx_ + bi]) {
        Vec2 a = img_[3 * t], b = img_[3 * t + 1], c = img_[3 * t + 2];
        double l0, l1, l2, area2;
        if (barycentric(a, b, c, p, l0, l1, l2, area2, 1e-12)) {
            Vec2 pre = dom_[3 * t] * l0 + dom_[3 * t + 1] * l1 + dom_[3 * t + 2] * l2;
            hits.push_back({t, pre, area2});
        }
    }
    return hits;
}

std::optional<ImageMesh::Hit> ImageMesh::locate(Vec2 p) const {
    auto hits = locate_all(p);
    if (hits.empty()) return std::nullopt;
    for (const auto& h : hits)
        if (h.orient > 0.0) return h;
    return hits.front();
}

double ImageMesh::union_area(double pixel) const {
    std::size_t px = std::max<std::size_t>(1, (std::size_t)std::ceil(bbox_.w / pixel));
    std::size_t py = std::max<std::size_t>(1, (std::size_t)std::ceil(bbox_.h / pixel));
    double dx = bbox_.w / double(px), dy = bbox_.h / double(py);
    std::size_t covered = 0;
    for (std::size_t j = 0; j < py; ++j) {
        for (std::size_t i = 0; i < px; ++i) {
            Vec2 p{bbox_.x0 + (double(i) + 0.5) * dx, bbox_.y0 + (double(j) + 0.5) * dy};
            if (!locate_all(p).empty()) ++covered;
        }
    }
    return double(covered) * dx * dy;
}

int ImageMesh::covering_degree(Vec2 p) const {
    int deg = 0;
    for (const auto& h : locate_all(p)) deg += h.orient > 0.0 ? 1 : (h.orient < 0.0 ? -1 : 0);
    return deg;
}

GridMap invert(const GridMap& m) { return invert(m, m.spacing()); }

GridMap invert(const GridMap& m, double out_spacing) {
    m.validate();
    // Injectivity on sample nodes via the covering degree at cell-center
    // images: any point covered more than once is a fold.
    ImageMesh mesh(m);
    for (std::size_t j = 0; j < m.cells_y(); ++j) {
        for (std::size_t i = 0; i < m.cells_x(); ++i) {
            if (!m.cell_defined(i, j)) continue;
            Vec2 c = (m.value(i, j) + m.value(i + 1, j) + m.value(i, j + 1) +
                      m.value(i + 1, j + 1)) *
                     0.25;
            if (mesh.locate_all(c).size() > 2)  // a point interior to a cell pair
                throw Error("NonInjective", "two cells' images overlap");
        }
    }

    Rect bb = mesh.bbox();
    double h = out_spacing;
    // Snap the output lattice to a multiple of h covering the bounding box.
    std::size_t nxc = std::max<std::size_t>(2, (std::size_t)std::ceil(bb.w / h - 1e-9));
    std::size_t nyc = std::max<std::size_t>(2, (std::size_t)std::ceil(bb.h / h - 1e-9));
    Rect out{bb.x0, bb.y0, double(nxc) * h, double(nyc) * h};
    GridMap inv(out, h);
    for (std::size_t j = 0; j < inv.ny(); ++j) {
        for (std::size_t i = 0; i < inv.nx(); ++i) {
            auto hit = mesh.locate(inv.node_pos(i, j));
            if (hit)
                inv.set(i, j, hit->preimage);
            else
                inv.mark_missing(i, j);
        }
    }
    return inv;
}

GridMap compose(const GridMap& outer, const GridMap& inner) {
    inner.validate();
    outer.validate();
    GridMap out(inner.domain(), inner.spacing());
    double tol = inner.spacing();
    for (std::size_t j = 0; j < inner.ny(); ++j) {
        for (std::size_t i = 0; i < inner.nx(); ++i) {
            if (!inner.defined(i, j)) {
                out.mark_missing(i, j);
                continue;
            }
            Vec2 mid = inner.value(i, j);
            try {
                out.set(i, j, outer.eval(mid, tol));
            } catch (const Error& e) {
                if (e.code() == "OutsideDomain")
                    throw Error("DomainMismatch",
                                "inner image node leaves outer domain by more than h");
                throw;
            }
        }
    }
    return out;
}

int multiplicity(const GridMap& m, Vec2 p) {
    m.validate();
    ImageMesh mesh(m);
    // Guard: p must stay clear of the image of the domain boundary.
    double h = m.spacing();
    for (std::size_t i = 0; i < m.nx(); ++i) {
        for (std::size_t j : {std::size_t(0), m.ny() - 1})
            if (m.defined(i, j) && (m.value(i, j) - p).norm() < h)
                throw Error("NearBoundary", "point too close to the boundary image");
    }
    for (std::size_t j = 0; j < m.ny(); ++j) {
        for (std::size_t i : {std::size_t(0), m.nx() - 1})
            if (m.defined(i, j) && (m.value(i, j) - p).norm() < h)
                throw Error("NearBoundary", "point too close to the boundary image");
    }
    return mesh.covering_degree(p);
}

CiarletNecasReport ciarlet_necas(const GridMap& m) {
    GradientField g = gradient_field(m);
    double h = m.spacing();
    CiarletNecasReport r;
    for (std::size_t j = 0; j < g.cells_y(); ++j)
        for (std::size_t i = 0; i < g.cells_x(); ++i)
            if (g.defined(i, j)) r.lhs += g.at(i, j).det() * h * h;
    ImageMesh mesh(m);
    r.rhs = mesh.union_area(h / 4.0);
    r.tol = 5.0 * h;
    r.satisfied = r.lhs <= r.rhs * (1.0 + r.tol);
    return r;
}

GridMap glue(const GridMap& base, const std::vector<std::pair<CellBox, GridMap>>& pieces) {
    base.validate();
    GridMap out = base;
    std::vector<char> taken(base.cells_x() * base.cells_y(), 0);
    for (const auto& [box, piece] : pieces) {
        if (box.i1 >= base.cells_x() || box.j1 >= base.cells_y() || box.i0 > box.i1 ||
            box.j0 > box.j1)
            throw Error("InvalidSubdomain", "cell box outside base lattice");
        for (std::size_t j = box.j0; j <= box.j1; ++j)
            for (std::size_t i = box.i0; i <= box.i1; ++i) {
                if (taken[j * base.cells_x() + i])
                    throw Error("OverlappingSubdomains", "cell assigned twice");
                taken[j * base.cells_x() + i] = 1;
            }
        std::size_t pnx = box.i1 - box.i0 + 2, pny = box.j1 - box.j0 + 2;
        if (piece.nx() != pnx || piece.ny() != pny ||
            std::abs(piece.spacing() - base.spacing()) > 1e-12)
            throw Error("InvalidSubdomain", "piece lattice does not match its box");
        // Boundary agreement, then overwrite interior nodes.
        for (std::size_t j = 0; j < pny; ++j) {
            for (std::size_t i = 0; i < pnx; ++i) {
                bool boundary = i == 0 || j == 0 || i == pnx - 1 || j == pny - 1;
                Vec2 pv = piece.value(i, j);
                Vec2 bv = base.value(box.i0 + i, box.j0 + j);
                if (boundary) {
                    double gap = (pv - bv).norm();
                    if (gap > 1e-9)
                        throw Error("BoundaryMismatch",
                                    "piece disagrees with base at node (" +
                                        std::to_string(box.i0 + i) + "," +
                                        std::to_string(box.j0 + j) + ") by " +
                                        std::to_string(gap));
                } else {
                    out.set(box.i0 + i, box.j0 + j, pv);
                }
            }
        }
    }
    return out;
}

}  // namespace qcplane
