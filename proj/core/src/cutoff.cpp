#include "qcplane/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "qcplane/extension.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/planar_maps.hpp"

namespace qcplane {

double choose_delta(const GridMap& y, double eps) {
    y.validate();
    double h = y.spacing();
    if (eps < 4.0 * h - 1e-12)
        throw Error("EpsTooSmall", "eps must be at least four lattice spacings");
    const Rect& dom = y.domain();
    double minmax = std::numeric_limits<double>::infinity();
    const int nc = 256;
    std::vector<Vec2> dirs(nc);
    for (int a = 0; a < nc; ++a) {
        double th = 2.0 * M_PI * double(a) / double(nc);
        dirs[a] = {std::cos(th), std::sin(th)};
    }
    for (std::size_t j = 0; j < y.ny(); ++j) {
        for (std::size_t i = 0; i < y.nx(); ++i) {
            Vec2 x0 = y.node_pos(i, j);
            if (x0.x - dom.x0 < eps - 1e-12 || dom.x0 + dom.w - x0.x < eps - 1e-12 ||
                x0.y - dom.y0 < eps - 1e-12 || dom.y0 + dom.h - x0.y < eps - 1e-12)
                continue;
            Vec2 v0 = y.value(i, j);
            double worst = 0.0;
            for (const Vec2& d : dirs)
                worst = std::max(worst, (y.eval(x0 + d * eps, h) - v0).norm());
            minmax = std::min(minmax, worst);
        }
    }
    return std::min(eps / 5.01, minmax);
}

Partition partition_domain(Rect omega, double eps, const QSReport& eta_table) {
    Partition part;
    part.eps = eps;
    double fx = omega.w / eps, fy = omega.h / eps;
    std::size_t nx = std::size_t(std::llround(fx)), ny = std::size_t(std::llround(fy));
    if (nx < 1 || ny < 1 || std::abs(fx - double(nx)) > 1e-9 * fx ||
        std::abs(fy - double(ny)) > 1e-9 * fy)
        throw Error("InvalidSubdomain", "eps must divide the rectangle sides");
    part.cells_x = nx;
    part.cells_y = ny;

    std::size_t gamma = 0;
    for (std::size_t g = 1; g <= 64; ++g) {
        if (eta_table.eta(1.0 / double(g)) <= 0.25) {
            gamma = g;
            break;
        }
    }
    if (gamma == 0)
        throw Error("GammaUnbounded", "eta(1/gamma) > 1/4 for all gamma <= 64");
    part.gamma = gamma;

    auto cell_ring = [&](std::size_t i, std::size_t j) {
        return std::min({i, j, nx - 1 - i, ny - 1 - j});
    };
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            std::size_t r = cell_ring(i, j);
            if (r < 2 * gamma)
                part.outer.push_back({i, j});
            else if (r == 2 * gamma)
                part.mid.push_back({i, j});
            else
                part.inner.push_back({i, j});
        }
    part.modified_measure = double(part.outer.size() + part.mid.size()) * eps * eps;

    auto node_ring = [&](std::size_t gi, std::size_t gj) {
        return std::min({gi, gj, nx - gi, ny - gj});
    };
    auto is_mid = [&](std::size_t i, std::size_t j) { return cell_ring(i, j) == 2 * gamma; };
    std::size_t id = 0;
    auto add_edge = [&](std::size_t gi0, std::size_t gj0, std::size_t gi1, std::size_t gj1) {
        Vec2 a{omega.x0 + double(gi0) * eps, omega.y0 + double(gj0) * eps};
        Vec2 b{omega.x0 + double(gi1) * eps, omega.y0 + double(gj1) * eps};
        if (node_ring(gi0, gj0) <= node_ring(gi1, gj1))
            part.edges.push_back({id++, a, b});
        else
            part.edges.push_back({id++, b, a});
    };
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            if (!is_mid(i, j)) continue;
            if (i + 1 < nx && is_mid(i + 1, j))  // shared vertical edge
                add_edge(i + 1, j, i + 1, j + 1);
            if (j + 1 < ny && is_mid(i, j + 1))  // shared horizontal edge
                add_edge(i, j + 1, i + 1, j + 1);
        }
    return part;
}

namespace {

std::vector<Vec2> circle_image(const GridMap& m, Vec2 center, double s,
                               const std::vector<Vec2>& dirs) {
    std::vector<Vec2> out(dirs.size());
    double h = m.spacing();
    for (std::size_t a = 0; a < dirs.size(); ++a)
        out[a] = m.eval(center + dirs[a] * s, h);
    return out;
}

bool polylines_cross(const std::vector<Vec2>& P, const std::vector<Vec2>& Q) {
    const std::size_t n = P.size(), m = Q.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = P[i], b = P[(i + 1) % n];
        double axl = std::min(a.x, b.x), axh = std::max(a.x, b.x);
        double ayl = std::min(a.y, b.y), ayh = std::max(a.y, b.y);
        for (std::size_t j = 0; j < m; ++j) {
            Vec2 c = Q[j], d = Q[(j + 1) % m];
            if (std::max(c.x, d.x) < axl || std::min(c.x, d.x) > axh ||
                std::max(c.y, d.y) < ayl || std::min(c.y, d.y) > ayh)
                continue;
            double d1 = (b - a).cross(c - a), d2 = (b - a).cross(d - a);
            double d3 = (d - c).cross(a - c), d4 = (d - c).cross(b - c);
            if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return true;
        }
    }
    return false;
}

}  // namespace

Bridge bridge_edge(const GridMap& y, const GridMap& yk, const GridEdge& edge,
                   double eps, double delta) {
    double h = y.spacing();
    if (y.max_node_distance(yk) > delta * (1.0 + 1e-9))
        throw Error("ClosenessViolated", "||y - yk|| exceeds delta");
    if (!(delta < eps / 5.0 * (1.0 + 1e-9)))
        throw Error("ClosenessViolated", "delta must stay below eps/5");

    Vec2 alpha = edge.outer_node, beta = edge.inner_node;
    const int nc = 256;
    std::vector<Vec2> dirs(nc);
    for (int a = 0; a < nc; ++a) {
        double th = 2.0 * M_PI * double(a) / double(nc);
        dirs[a] = {std::cos(th), std::sin(th)};
    }
    auto intersects = [&](double s) {
        return polylines_cross(circle_image(y, alpha, s, dirs),
                               circle_image(yk, beta, s, dirs));
    };

    double lo = eps / 2.0 - delta, hi = eps / 2.0 + delta;
    while (lo > h / 8.0 && intersects(lo)) lo *= 0.5;
    while (hi < 0.95 * eps && !intersects(hi)) hi += delta;
    if (intersects(lo) || !intersects(hi))
        throw Error("RadiusOutOfBounds", "no touching radius bracket found");
    while (hi - lo > h / 4.0) {
        double mid = 0.5 * (lo + hi);
        (intersects(mid) ? hi : lo) = mid;
    }
    double r = hi;
    if (r <= eps / 2.0 - delta / 2.0 - h / 4.0 || r >= eps / 2.0 + delta / 2.0 + h / 4.0)
        throw Error("RadiusOutOfBounds",
                    "touching radius " + std::to_string(r) + " violates the delta bounds");

    // Touching point: lexicographically smallest midpoint of the closest
    // approach between the two image circles.
    auto P = circle_image(y, alpha, r, dirs);
    auto Q = circle_image(yk, beta, r, dirs);
    double best = std::numeric_limits<double>::infinity();
    Vec2 z0, xs, xks;
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            double d = (P[i] - Q[j]).norm();
            Vec2 mid = (P[i] + Q[j]) * 0.5;
            if (d < best - 1e-12 || (d < best + 1e-12 && lex_less(mid, z0))) {
                best = d;
                z0 = mid;
                xs = alpha + dirs[i] * r;
                xks = beta + dirs[j] * r;
            }
        }

    Bridge b;
    b.edge_id = edge.id;
    b.r = r;
    b.z0 = z0;
    b.x_star = xs;
    b.xk_star = xks;
    b.eps = eps;
    b.delta = delta;
    b.midpoint_deviation = (xs - (alpha + beta) * 0.5).norm();

    Vec2 e = (beta - alpha) / eps;  // unit edge direction
    Vec2 ep{-e.y, e.x};
    auto outer_mat = [](Vec2 col_e, Vec2 col_p, Vec2 e_, Vec2 ep_) {
        // Matrix sending e_ -> col_e and ep_ -> col_p.
        return Mat2{col_e.x * e_.x + col_p.x * ep_.x, col_e.x * e_.y + col_p.x * ep_.y,
                    col_e.y * e_.x + col_p.y * ep_.x, col_e.y * e_.y + col_p.y * ep_.y};
    };
    b.phi1_lin = outer_mat((xs - alpha) * (2.0 / eps), ep, e, ep);
    b.phi1_off = alpha - b.phi1_lin * alpha;
    b.phi2_lin = outer_mat((xks - beta) * (-2.0 / eps), ep, e, ep);
    b.phi2_off = beta - b.phi2_lin * beta;
    for (const Mat2& L : {b.phi1_lin, b.phi2_lin}) {
        auto sv = singular_values(L);
        double lip = sv[1] > 0.0 ? std::max(sv[0], 1.0 / sv[1])
                                 : std::numeric_limits<double>::infinity();
        b.bilipschitz = std::max(b.bilipschitz, lip);
    }

    b.omega.closed = false;
    const int ns = 128;
    for (int i = 0; i <= ns; ++i) {
        double s = eps * double(i) / double(ns);
        Vec2 p;
        if (i == ns / 2)
            p = z0;
        else if (s < eps / 2.0)
            p = y.eval(alpha + (xs - alpha) * (2.0 * s / eps), h);
        else
            p = yk.eval(beta + (xks - beta) * (2.0 * (eps - s) / eps), h);
        b.omega.vertices.push_back(p);
    }
    return b;
}

namespace {

double arc_condition_open(const PlanarCurve& c) {
    const auto& v = c.vertices;
    double worst = 1.0;
    for (std::size_t i = 0; i + 2 < v.size(); ++i)
        for (std::size_t j = i + 2; j < v.size(); ++j) {
            double chord = (v[j] - v[i]).norm();
            if (chord <= 0.0) continue;
            for (std::size_t k = i + 1; k < j; ++k)
                worst = std::max(worst,
                                 ((v[i] - v[k]).norm() + (v[j] - v[k]).norm()) / chord);
        }
    return worst;
}

Vec2 curve_at_uniform(const PlanarCurve& c, double s, double eps) {
    double u = s / eps * double(c.vertices.size() - 1);
    std::size_t k = std::min(std::size_t(std::max(0.0, std::floor(u))),
                             c.vertices.size() - 2);
    double w = u - double(k);
    return c.vertices[k] + (c.vertices[k + 1] - c.vertices[k]) * w;
}

}  // namespace

Bridge reparametrize_bridge(const Bridge& b) {
    double c = arc_condition_open(b.omega);
    if (c > 50.0)
        throw Error("NotQuasicircle",
                    "bridge arc condition constant " + std::to_string(c) + " exceeds 50");
    const double eps = b.eps;
    const std::size_t n = b.omega.vertices.size();

    // Chord-length position map L: uniform parameter -> [0, eps].
    std::vector<double> ts(n), ls(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) ts[i] = eps * double(i) / double(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        ls[i] = ls[i - 1] + (b.omega.vertices[i] - b.omega.vertices[i - 1]).norm();
    double total = ls.back();
    for (auto& l : ls) l = l / total * eps;
    ls.back() = eps;
    Homeo1D L(ts, ls);
    Homeo1D E(ls, ts);  // even (constant-speed) parametrization

    // lambda = d/4 from the two-sided join search on (identity, L).
    double d = 0.0;
    {
        QSReport qi = m_condition(Homeo1D::identity(eps));
        QSReport ql = m_condition(L);
        for (int ex = 2; ex <= 20; ++ex) {
            double cand = std::ldexp(1.0, -ex);
            if (std::max(qi.eta(cand), ql.eta(cand)) <= 0.25) {
                d = cand;
                break;
            }
        }
    }
    if (d == 0.0) throw Error("NotQuasicircle", "no valid join width for the bridge");
    double lam = d / 4.0;

    // sigma: identity within lam*eps of both ends, affinely rescaled even
    // parametrization in between.
    double a0 = lam * eps, a1 = eps - lam * eps;
    double e0 = E.inverse(a0), e1 = E.inverse(a1);
    auto sigma = [&](double t) {
        if (t <= a0 || t >= a1) return t;
        return E(e0 + (t - a0) * (e1 - e0) / (a1 - a0));
    };

    Bridge out = b;
    out.reparametrized = true;
    for (std::size_t i = 0; i < n; ++i)
        out.omega.vertices[i] = curve_at_uniform(b.omega, sigma(ts[i]), eps);
    // Keep the touching point an exact vertex.
    out.omega.vertices[(n - 1) / 2] = b.z0;

    // Traversal quality: M-condition of the chord-length profile.
    std::vector<double> ts2(n), ls2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) ts2[i] = ts[i];
    for (std::size_t i = 1; i < n; ++i)
        ls2[i] = ls2[i - 1] + (out.omega.vertices[i] - out.omega.vertices[i - 1]).norm();
    double tot2 = ls2.back();
    for (auto& l : ls2) l = l / tot2 * eps;
    ls2.back() = eps;
    out.param_M = m_condition(Homeo1D(ts2, ls2)).M;
    return out;
}

namespace {

QSReport midline_eta(const GridMap& y) {
    std::size_t j = y.ny() / 2;
    std::vector<double> ts{0.0}, vs{0.0};
    double acc = 0.0;
    for (std::size_t i = 1; i < y.nx(); ++i) {
        acc += (y.value(i, j) - y.value(i - 1, j)).norm();
        ts.push_back(double(i) * y.spacing());
        vs.push_back(acc);
    }
    return m_condition(Homeo1D(ts, vs));
}

std::string cell_tag(std::size_t i, std::size_t j) {
    return "cell (" + std::to_string(i) + "," + std::to_string(j) + "): ";
}

}  // namespace

CutoffResult assemble_cutoff(const GridMap& y, const GridMap& yk, double eps) {
    y.validate();
    yk.validate();
    if (std::abs(y.spacing() - yk.spacing()) > 1e-12 || y.nx() != yk.nx() ||
        y.ny() != yk.ny())
        throw Error("DomainMismatch", "y and yk must share lattice and domain");
    const double h = y.spacing();
    double qf = eps / h;
    std::size_t q = std::size_t(std::llround(qf));
    if (std::abs(qf - double(q)) > 1e-9 || q < 4)
        throw Error("EpsTooSmall", "eps must be an integer multiple (>= 4) of the spacing");

    CutoffResult res;
    double delta = choose_delta(y, eps);
    if (y.max_node_distance(yk) > delta * (1.0 + 1e-9))
        throw Error("ClosenessViolated", "||y - yk|| exceeds the chosen delta");

    res.partition = partition_domain(y.domain(), eps, midline_eta(y));
    const Partition& part = res.partition;

    GridMap omega = y;
    for (const CellIndex& c : part.inner)
        for (std::size_t dj = 0; dj <= q; ++dj)
            for (std::size_t di = 0; di <= q; ++di) {
                std::size_t gi = c.i * q + di, gj = c.j * q + dj;
                omega.set(gi, gj, yk.value(gi, gj));
            }

    // Bridges on the radial edges; their traces land on the lattice nodes
    // along each edge.
    std::map<std::pair<long long, long long>, std::size_t> edge_lookup;
    auto key_of = [&](Vec2 a, Vec2 b) {
        Vec2 m = (a + b) * 0.5;
        return std::make_pair(std::llround((m.x - y.domain().x0) / h * 4.0),
                              std::llround((m.y - y.domain().y0) / h * 4.0));
    };
    for (const GridEdge& e : part.edges) {
        Bridge b = reparametrize_bridge(bridge_edge(y, yk, e, eps, delta));
        edge_lookup[key_of(e.outer_node, e.inner_node)] = res.bridge_list.size();
        Vec2 dir = (e.inner_node - e.outer_node) / eps;
        // Endpoints stay at their y (outer) and yk (inner) node values.
        for (std::size_t m = 1; m < q; ++m) {
            double s = double(m) * h;
            Vec2 pos = e.outer_node + dir * s;
            std::size_t gi = std::size_t(std::llround((pos.x - y.domain().x0) / h));
            std::size_t gj = std::size_t(std::llround((pos.y - y.domain().y0) / h));
            omega.set(gi, gj, curve_at_uniform(b.omega, s, eps));
        }
        res.bridge_list.push_back(std::move(b));
    }

    // Per-square extension on the middle ring.
    for (const CellIndex& c : part.mid) {
        Vec2 corner{y.domain().x0 + double(c.i) * eps, y.domain().y0 + double(c.j) * eps};
        BoundaryMap bm;
        auto sample_edge = [&](Vec2 from, Vec2 to, double p_base) {
            // from/to are square corners; 2q samples, endpoint excluded.
            auto it = edge_lookup.find(key_of(from, to));
            const Bridge* br =
                it != edge_lookup.end() ? &res.bridge_list[it->second] : nullptr;
            bool from_outer =
                br && (from - part.edges[it->second].outer_node).norm() < h / 2.0;
            for (std::size_t m = 0; m < 2 * q; ++m) {
                double t = double(m) / double(2 * q);  // fraction along edge
                Vec2 val;
                if (br) {
                    val = curve_at_uniform(br->omega,
                                           (from_outer ? t : 1.0 - t) * eps, eps);
                } else {
                    val = omega.eval(from + (to - from) * t, h);
                }
                bm.params.push_back(p_base + t);
                bm.points.push_back(val);
            }
        };
        Vec2 c00 = corner, c10 = corner + Vec2{eps, 0}, c11 = corner + Vec2{eps, eps},
             c01 = corner + Vec2{0, eps};
        sample_edge(c00, c10, 0.0);
        sample_edge(c10, c11, 1.0);
        sample_edge(c11, c01, 2.0);
        sample_edge(c01, c00, 3.0);
        try {
            ExtensionResult ext = extend_on_square(bm, q);
            for (std::size_t dj = 1; dj < q; ++dj)
                for (std::size_t di = 1; di < q; ++di)
                    omega.set(c.i * q + di, c.j * q + dj, ext.map.value(di, dj));
        } catch (const Error& err) {
            throw Error(err.code(), cell_tag(c.i, c.j) + err.what());
        }
    }

    // Report.
    CutoffReport& rep = res.report;
    rep.eps = eps;
    rep.delta = delta;
    rep.bound = 3.0 * eps + delta;
    rep.modified_measure = part.modified_measure;
    rep.bridges = res.bridge_list.size();
    rep.mid_squares = part.mid.size();
    rep.sup_y_omega = y.max_node_distance(omega);

    rep.boundary_exact = true;
    for (const CellIndex& c : part.outer) {
        for (std::size_t dj = 0; dj <= q && rep.boundary_exact; ++dj)
            for (std::size_t di = 0; di <= q; ++di) {
                std::size_t gi = c.i * q + di, gj = c.j * q + dj;
                Vec2 a = omega.value(gi, gj), b = y.value(gi, gj);
                if (a.x != b.x || a.y != b.y) {
                    rep.boundary_exact = false;
                    break;
                }
            }
    }

    DistortionReport dist = distortion(gradient_field(omega));
    rep.distortion_sup = dist.sup;

    // Inverse deviation and multiplicity on a deterministic sample.
    std::mt19937 rng(0);
    std::uniform_real_distribution<double> ux(y.domain().x0 + 2 * h,
                                              y.domain().x0 + y.domain().w - 2 * h);
    std::uniform_real_distribution<double> uy(y.domain().y0 + 2 * h,
                                              y.domain().y0 + y.domain().h - 2 * h);
    ImageMesh mesh(omega);
    rep.multiplicity_one = true;
    std::size_t mult_checked = 0;
    for (int s = 0; s < 100; ++s) {
        Vec2 x{ux(rng), uy(rng)};
        Vec2 z = y.eval(x, h);
        if (auto hit = mesh.locate(z))
            rep.sup_inverse = std::max(rep.sup_inverse, (hit->preimage - x).norm());
        Vec2 zo = omega.eval(x, h);
        try {
            if (multiplicity(omega, zo) != 1) rep.multiplicity_one = false;
            ++mult_checked;
        } catch (const Error&) {
            // Near-boundary sample: skipped, like the operation demands.
        }
    }
    if (mult_checked == 0) rep.multiplicity_one = false;
    rep.ciarlet_necas_ok = ciarlet_necas(omega).satisfied;

    res.omega = std::move(omega);
    return res;
}

}  // namespace qcplane
