#include "qcplane/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcplane {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double spectral2(const Mat2& A) {
    double s = spectral_norm(A);
    return s * s;
}
}  // namespace

EnergyDensitySpec density_by_name(const std::string& name, double p, double q,
                                  const Mat2& center) {
    EnergyDensitySpec v;
    v.name = name;
    if (name == "dirichlet") {
        v.eval = [](const Mat2& A) { return spectral2(A); };
        v.C = 1.0;
        v.p = 2.0;
        v.q = 0.0;
        v.tag = EnergyDensitySpec::Tag::Convex;
    } else if (name == "det") {
        v.eval = [](const Mat2& A) { return A.det(); };
        v.C = 1.0;
        v.p = 2.0;
        v.q = 0.0;
        v.tag = EnergyDensitySpec::Tag::NullLagrangian;
    } else if (name == "neg-det") {
        v.eval = [](const Mat2& A) { return -A.det(); };
        v.C = 1.0;
        v.p = 2.0;
        v.q = 0.0;
        v.tag = EnergyDensitySpec::Tag::Custom;
    } else if (name == "elastic-pq") {
        v.p = p;
        v.q = q;
        v.C = 1.0;
        v.eval = [p, q](const Mat2& A) {
            double dt = A.det();
            if (dt <= 0.0) return kInf;
            return std::pow(spectral_norm(A), p) + std::pow(dt, -q);
        };
        v.tag = EnergyDensitySpec::Tag::Polyconvex;
        v.blows_up_at_degenerate = true;
    } else if (name == "bump") {
        v.eval = [center](const Mat2& A) {
            Mat2 d = A - center;
            return -d.frobenius2();
        };
        v.C = 1.0;
        v.p = 2.0;
        v.q = 0.0;
        v.tag = EnergyDensitySpec::Tag::Custom;
    } else {
        throw Error("InvalidGridMap", "unknown density name: " + name);
    }
    return v;
}

double energy(const GridMap& y, const EnergyDensitySpec& v) {
    GradientField g = gradient_field(y);
    double h2 = y.spacing() * y.spacing();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.cells_y(); ++j)
        for (std::size_t i = 0; i < g.cells_x(); ++i) {
            if (!g.defined(i, j)) continue;
            const Mat2& A = g.at(i, j);
            if (v.blows_up_at_degenerate && A.det() <= 0.0) return kInf;
            double val = v(A);
            if (!std::isfinite(val)) return kInf;
            acc += val * h2;
        }
    return acc;
}

double penalized_energy(const GridMap& y, const EnergyDensitySpec& v, double eps_pen) {
    GradientField g = gradient_field(y);
    DistortionReport d = distortion(g);
    if (d.degenerate_fraction > 0.0) return kInf;
    double e = energy(y, v);
    if (!std::isfinite(e)) return kInf;
    return e + eps_pen * d.sup;
}

LscReport lsc_experiment(const EnergyDensitySpec& v, const std::vector<GridMap>& seq,
                         const GridMap& limit) {
    LscReport rep;
    for (const auto& y : seq) rep.J_seq.push_back(energy(y, v));
    std::size_t tail = std::max<std::size_t>(1, rep.J_seq.size() / 2);
    rep.liminf_seq = kInf;
    for (std::size_t i = rep.J_seq.size() - tail; i < rep.J_seq.size(); ++i)
        rep.liminf_seq = std::min(rep.liminf_seq, rep.J_seq[i]);
    rep.J_limit = energy(limit, v);
    double scale = std::max({1.0, std::abs(rep.liminf_seq), std::abs(rep.J_limit)});
    rep.tol = 1e-3 * scale;
    rep.satisfied = rep.J_limit <= rep.liminf_seq + rep.tol;
    return rep;
}

EquiintegrabilityProfile equiintegrability_profile(const std::vector<GridMap>& seq,
                                                   double p, double q) {
    EquiintegrabilityProfile prof;
    for (int e = -2; e <= 20; ++e) prof.thresholds.push_back(std::ldexp(1.0, e));
    prof.sup_tails.assign(prof.thresholds.size(), 0.0);
    for (const auto& y : seq) {
        GradientField g = gradient_field(y);
        double h2 = y.spacing() * y.spacing();
        for (std::size_t t = 0; t < prof.thresholds.size(); ++t) {
            double M = prof.thresholds[t];
            double tail = 0.0;
            for (std::size_t j = 0; j < g.cells_y(); ++j)
                for (std::size_t i = 0; i < g.cells_x(); ++i) {
                    if (!g.defined(i, j)) continue;
                    const Mat2& A = g.at(i, j);
                    double gp = std::pow(spectral_norm(A), p);
                    if (gp > M) tail += gp * h2;
                    if (q > 0.0) {
                        double dt = A.det();
                        double dq = dt > 0.0 ? std::pow(dt, -q) : kInf;
                        if (dq > M) tail += (std::isfinite(dq) ? dq : 0.0) * h2;
                    }
                }
            prof.sup_tails[t] = std::max(prof.sup_tails[t], tail);
        }
    }
    return prof;
}

namespace {

struct CellCache {
    std::vector<double> e;  // v(grad) * h^2 per cell
    std::vector<double> k;  // distortion per cell
};

double cell_terms(const GridMap& y, const EnergyDensitySpec& v, std::size_t i,
                  std::size_t j, double& dist) {
    double h = y.spacing();
    Vec2 v00 = y.value(i, j), v10 = y.value(i + 1, j);
    Vec2 v01 = y.value(i, j + 1), v11 = y.value(i + 1, j + 1);
    Vec2 dx = ((v10 + v11) - (v00 + v01)) / (2.0 * h);
    Vec2 dy = ((v01 + v11) - (v00 + v10)) / (2.0 * h);
    Mat2 A{dx.x, dy.x, dx.y, dy.y};
    dist = distortion_of(A);
    return v(A) * h * h;
}

}  // namespace

MinimizeResult minimize_penalized(const EnergyDensitySpec& v, double eps_pen,
                                  const BoundaryMap& boundary, const GridMap& init,
                                  const MinimizeOptions& opts) {
    init.validate();
    GridMap y = init;
    const std::size_t cx = y.cells_x(), cy = y.cells_y();
    const double h = y.spacing();

    // Feasibility: positive determinants and boundary agreement.
    {
        GradientField g = gradient_field(y);
        for (std::size_t j = 0; j < cy; ++j)
            for (std::size_t i = 0; i < cx; ++i)
                if (!g.defined(i, j) || g.at(i, j).det() <= 0.0)
                    throw Error("InfeasibleInit",
                                "cell (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") has nonpositive determinant");
        const Rect& dom = y.domain();
        double per = 2.0 * (dom.w + dom.h);
        for (std::size_t j = 0; j < y.ny(); ++j) {
            for (std::size_t i = 0; i < y.nx(); ++i) {
                bool bdry = i == 0 || j == 0 || i == y.nx() - 1 || j == y.ny() - 1;
                if (!bdry) continue;
                Vec2 p = y.node_pos(i, j);
                double u = (p.x - dom.x0) / dom.w, w2 = (p.y - dom.y0) / dom.h;
                // Unit-square arc-length parameter of the boundary node.
                double t;
                if (j == 0)
                    t = u;
                else if (i == y.nx() - 1 && j != y.ny() - 1)
                    t = 1.0 + w2;
                else if (j == y.ny() - 1 && i != 0)
                    t = 3.0 - u;
                else
                    t = 4.0 - w2;
                Vec2 want = boundary.at(std::fmod(t, 4.0));
                if ((want - y.value(i, j)).norm() > 1e-6 * (1.0 + per))
                    throw Error("InfeasibleInit", "boundary trace mismatch");
            }
        }
    }

    CellCache cache;
    cache.e.assign(cx * cy, 0.0);
    cache.k.assign(cx * cy, 1.0);
    double sumE = 0.0;
    for (std::size_t j = 0; j < cy; ++j)
        for (std::size_t i = 0; i < cx; ++i) {
            double d;
            double e = cell_terms(y, v, i, j, d);
            cache.e[j * cx + i] = e;
            cache.k[j * cx + i] = d;
            sumE += e;
        }
    auto max_dist = [&](const std::vector<std::pair<std::size_t, double>>& repl) {
        double m = 0.0;
        for (std::size_t c = 0; c < cache.k.size(); ++c) {
            double val = cache.k[c];
            for (const auto& r : repl)
                if (r.first == c) val = r.second;
            m = std::max(m, val);
        }
        return m;
    };
    double J = sumE + eps_pen * max_dist({});

    MinimizeResult res;
    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        std::size_t accepted = 0;
        for (std::size_t j = 1; j + 1 < y.ny(); ++j) {
            for (std::size_t i = 1; i + 1 < y.nx(); ++i) {
                // Incident cells of node (i,j).
                std::size_t ids[4] = {(j - 1) * cx + (i - 1), (j - 1) * cx + i,
                                      j * cx + (i - 1), j * cx + i};
                for (double step = h / 2.0; step >= h / 64.0 - 1e-18; step /= 2.0) {
                    static const Vec2 dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                    bool moved = false;
                    for (const Vec2& dir : dirs) {
                        Vec2 old = y.value(i, j);
                        y.set(i, j, old + dir * step);
                        double newE[4], newK[4];
                        bool ok = true;
                        double dSum = 0.0;
                        std::vector<std::pair<std::size_t, double>> repl;
                        for (int c = 0; c < 4; ++c) {
                            std::size_t ci = ids[c] % cx, cj = ids[c] / cx;
                            double d;
                            newE[c] = cell_terms(y, v, ci, cj, d);
                            newK[c] = d;
                            dSum += newE[c] - cache.e[ids[c]];
                            repl.push_back({ids[c], d});
                        }
                        // Determinant floor on incident cells.
                        for (int c = 0; c < 4 && ok; ++c) {
                            std::size_t ci = ids[c] % cx, cj = ids[c] / cx;
                            Vec2 v00 = y.value(ci, cj), v10 = y.value(ci + 1, cj);
                            Vec2 v01 = y.value(ci, cj + 1), v11 = y.value(ci + 1, cj + 1);
                            Vec2 dx = ((v10 + v11) - (v00 + v01)) / (2.0 * h);
                            Vec2 dyv = ((v01 + v11) - (v00 + v10)) / (2.0 * h);
                            if (dx.x * dyv.y - dyv.x * dx.y <= opts.det_floor) ok = false;
                        }
                        double Jnew = kInf;
                        if (ok && std::isfinite(dSum))
                            Jnew = sumE + dSum + eps_pen * max_dist(repl);
                        if (Jnew < J) {
                            sumE += dSum;
                            for (int c = 0; c < 4; ++c) {
                                cache.e[ids[c]] = newE[c];
                                cache.k[ids[c]] = newK[c];
                            }
                            J = Jnew;
                            ++accepted;
                            moved = true;
                            break;
                        }
                        y.set(i, j, old);
                    }
                    if (moved) break;
                }
            }
        }
        res.J_trace.push_back(J);
        res.accepted_moves += accepted;
        if (accepted == 0) break;
    }
    res.map = std::move(y);
    return res;
}

}  // namespace qcplane
