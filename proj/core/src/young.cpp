#include "qcplane/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcplane {

Mat2 EmpiricalYoungMeasure::first_moment(std::size_t i, std::size_t j) const {
    Mat2 m{0, 0, 0, 0};
    for (const Atom& a : atoms(i, j)) m = m + a.m * a.w;
    return m;
}

double EmpiricalYoungMeasure::pair(std::size_t i, std::size_t j,
                                   const std::function<double(const Mat2&)>& v) const {
    double acc = 0.0;
    for (const Atom& a : atoms(i, j)) acc += a.w * v(a.m);
    return acc;
}

void EmpiricalYoungMeasure::validate() const {
    for (std::size_t j = 0; j < cy_; ++j)
        for (std::size_t i = 0; i < cx_; ++i) {
            const auto& as = atoms(i, j);
            if (as.empty()) continue;
            double sum = 0.0;
            for (const Atom& a : as) {
                if (a.w < 0.0)
                    throw Error("InvalidGridMap", "negative atom weight");
                if (!a.m.finite())
                    throw Error("InvalidGridMap", "non-finite atom matrix");
                sum += a.w;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw Error("InvalidGridMap", "cell weights must sum to 1");
        }
}

namespace {

struct RankOne {
    Vec2 a, n;
};

RankOne rank_one_split(const Mat2& D) {
    double scale = std::max(D.frobenius2(), 1e-300);
    if (std::abs(D.det()) > 1e-9 * scale)
        throw Error("NotRankOne", "B - A has rank two");
    Vec2 r1{D.a, D.b}, r2{D.c, D.d};
    Vec2 n = r1.norm2() >= r2.norm2() ? r1 : r2;
    double nn = n.norm();
    if (nn == 0.0) return {{0, 0}, {1, 0}};
    n = n / nn;
    // Snap to the axes when essentially aligned, for an exact cell census.
    if (std::abs(n.y) < 1e-12) n = {n.x > 0 ? 1.0 : -1.0, 0.0};
    if (std::abs(n.x) < 1e-12) n = {0.0, n.y > 0 ? 1.0 : -1.0};
    Vec2 a{D.a * n.x + D.b * n.y, D.c * n.x + D.d * n.y};
    return {a, n};
}

std::size_t snap_fraction(double lambda, std::size_t& mA) {
    std::size_t best_m = 1;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m <= 64; ++m) {
        double r = std::round(lambda * double(m));
        double err = std::abs(r / double(m) - lambda);
        if (err < best_err - 1e-15) {
            best_err = err;
            best_m = m;
        }
        if (err <= 0.005 && m >= 2) {
            mA = std::size_t(std::round(lambda * double(m)));
            return m;
        }
    }
    mA = std::size_t(std::round(lambda * double(best_m)));
    return best_m;
}

}  // namespace

GridMap laminate_map(const Mat2& A, const Mat2& B, double lambda, std::size_t k,
                     Rect omega) {
    if (!(lambda > 0.0) || !(lambda < 1.0)) {
        const Mat2& G = lambda >= 1.0 ? A : B;
        if (G.det() <= 0.0) throw Error("OutsideCone", "gradient has nonpositive determinant");
        double h = omega.w / 64.0;
        return GridMap::sample(omega, h, [&](Vec2 x) { return G * x; }, "affine");
    }
    Mat2 D = B - A;
    RankOne ro = rank_one_split(D);
    if (A.det() <= 0.0 || B.det() <= 0.0)
        throw Error("OutsideCone", "laminate gradients must have positive determinant");

    std::size_t mA = 0;
    std::size_t m = snap_fraction(lambda, mA);
    double ls = double(mA) / double(m);   // snapped volume fraction of A
    Mat2 M = A * ls + B * (1.0 - ls);

    bool axis_x = ro.n.y == 0.0, axis_y = ro.n.x == 0.0;
    double extent = axis_y ? omega.h : omega.w;
    double h = extent / double(k * m);
    double p = extent / double(k);

    GridMap out(omega, h);
    // Sawtooth antiderivative: slope -(1-ls) on the A-piece, +ls on the B-piece.
    auto phi_axis = [&](std::size_t idx) {
        std::size_t within = idx % m;
        double w = double(within);
        if (within <= mA) return -(1.0 - ls) * w * h;
        return -(1.0 - ls) * double(mA) * h + ls * (w - double(mA)) * h;
    };
    auto phi_general = [&](double t) {
        double u = t / p;
        double per = std::floor(u);
        double s = (u - per) * p;
        double la = ls * p;
        if (s <= la) return -(1.0 - ls) * s;
        return -(1.0 - ls) * la + ls * (s - la);
    };
    double sgn = (axis_x && ro.n.x < 0.0) || (axis_y && ro.n.y < 0.0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < out.ny(); ++j) {
        for (std::size_t i = 0; i < out.nx(); ++i) {
            Vec2 x = out.node_pos(i, j);
            double phi;
            if (axis_x)
                phi = sgn * phi_axis(i);
            else if (axis_y)
                phi = sgn * phi_axis(j);
            else
                phi = phi_general(x.dot(ro.n) - Vec2{omega.x0, omega.y0}.dot(ro.n));
            out.set(i, j, M * x + ro.a * phi);
        }
    }
    out.set_analytic_tag("laminate");
    return out;
}

std::vector<GridMap> laminate_sequence(const Mat2& A, const Mat2& B, double lambda,
                                       const std::vector<std::size_t>& ks, Rect omega) {
    std::vector<GridMap> seq;
    seq.reserve(ks.size());
    for (std::size_t k : ks) seq.push_back(laminate_map(A, B, lambda, k, omega));
    return seq;
}

EmpiricalYoungMeasure empirical_measure(const std::vector<GridMap>& seq,
                                        std::size_t coarsening) {
    if (seq.empty()) throw Error("DomainMismatch", "empty sequence");
    const Rect& dom = seq.front().domain();
    for (const auto& y : seq) {
        const Rect& d = y.domain();
        if (std::abs(d.x0 - dom.x0) > 1e-12 || std::abs(d.y0 - dom.y0) > 1e-12 ||
            std::abs(d.w - dom.w) > 1e-12 || std::abs(d.h - dom.h) > 1e-12)
            throw Error("DomainMismatch", "sequence members must share a domain");
    }
    const GridMap& last = seq.back();
    GradientField g = gradient_field(last);
    std::size_t cx = g.cells_x() / coarsening, cy = g.cells_y() / coarsening;
    if (cx == 0 || cy == 0)
        throw Error("InvalidSubdomain", "coarsening exceeds the lattice");

    EmpiricalYoungMeasure m(dom, last.spacing() * double(coarsening), cx, cy);
    for (std::size_t J = 0; J < cy; ++J) {
        for (std::size_t I = 0; I < cx; ++I) {
            auto& atoms = m.atoms(I, J);
            std::size_t count = 0;
            for (std::size_t j = J * coarsening; j < (J + 1) * coarsening; ++j) {
                for (std::size_t i = I * coarsening; i < (I + 1) * coarsening; ++i) {
                    if (!g.defined(i, j)) continue;
                    const Mat2& a = g.at(i, j);
                    ++count;
                    bool merged = false;
                    for (Atom& at : atoms) {
                        double diff = std::max({std::abs(at.m.a - a.a), std::abs(at.m.b - a.b),
                                                std::abs(at.m.c - a.c), std::abs(at.m.d - a.d)});
                        if (diff <= 1e-6) {
                            at.w += 1.0;
                            merged = true;
                            break;
                        }
                    }
                    if (!merged) atoms.push_back({a, 1.0});
                }
            }
            if (count > 0)
                for (Atom& at : atoms) at.w /= double(count);
            std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
                if (x.m.a != y.m.a) return x.m.a < y.m.a;
                if (x.m.b != y.m.b) return x.m.b < y.m.b;
                if (x.m.c != y.m.c) return x.m.c < y.m.c;
                return x.m.d < y.m.d;
            });
        }
    }
    m.validate();
    return m;
}

SupportReport support_check(const EmpiricalYoungMeasure& m, double K) {
    QCMatrixCone cone{K};
    SupportReport rep;
    double inside = 0.0, total = 0.0;
    for (std::size_t j = 0; j < m.cells_y(); ++j)
        for (std::size_t i = 0; i < m.cells_x(); ++i) {
            const auto& atoms = m.atoms(i, j);
            if (atoms.empty()) {
                ++rep.skipped_cells;
                continue;
            }
            for (const Atom& a : atoms) {
                total += a.w;
                double excess = distortion_of(a.m) - K;
                if (cone.contains(a.m))
                    inside += a.w;
                if (excess > rep.worst_excess || (rep.worst_excess == 0.0 && total == a.w)) {
                    rep.worst_excess = std::max(excess, 0.0);
                    rep.worst_atom = a;
                }
            }
        }
    rep.fraction_inside = total > 0.0 ? inside / total : 0.0;
    return rep;
}

namespace {

Mat2 block_average(const GradientField& g, std::size_t I, std::size_t J, std::size_t f) {
    Mat2 acc{0, 0, 0, 0};
    std::size_t count = 0;
    for (std::size_t j = J * f; j < (J + 1) * f && j < g.cells_y(); ++j)
        for (std::size_t i = I * f; i < (I + 1) * f && i < g.cells_x(); ++i) {
            if (!g.defined(i, j)) continue;
            acc = acc + g.at(i, j);
            ++count;
        }
    return count ? acc * (1.0 / double(count)) : acc;
}

}  // namespace

MomentReport moment_field(const EmpiricalYoungMeasure& m, const GridMap& reference) {
    GradientField ref = gradient_field(reference);
    std::size_t f = std::size_t(std::round(m.cell_size() / reference.spacing()));
    if (f == 0) f = 1;
    MomentReport rep;
    rep.moments = GradientField(m.domain(), m.cell_size(), m.cells_x(), m.cells_y());
    for (std::size_t j = 0; j < m.cells_y(); ++j)
        for (std::size_t i = 0; i < m.cells_x(); ++i) {
            if (m.atoms(i, j).empty()) continue;
            Mat2 mom = m.first_moment(i, j);
            rep.moments.set(i, j, mom);
            Mat2 dev = mom - block_average(ref, i, j, f);
            rep.sup_deviation = std::max(rep.sup_deviation, spectral_norm(dev));
        }
    return rep;
}

JensenReport jensen_check(const EmpiricalYoungMeasure& m, const EnergyDensitySpec& v,
                          const GridMap& y) {
    GradientField g = gradient_field(y);
    std::size_t f = std::size_t(std::round(m.cell_size() / y.spacing()));
    if (f == 0) f = 1;
    JensenReport rep;
    for (std::size_t j = 0; j < m.cells_y(); ++j)
        for (std::size_t i = 0; i < m.cells_x(); ++i) {
            const auto& atoms = m.atoms(i, j);
            if (atoms.empty()) continue;
            bool inadmissible = false;
            for (const Atom& a : atoms) {
                if (v.blows_up_at_degenerate && a.m.det() <= 0.0)
                    throw Error("DensityUndefined", "density blows up on a degenerate atom");
                // The certificate lives in the class 0 <= v <= C(...); a
                // density going negative on the support is outside it, so
                // the Jensen conclusion is not certified for this cell.
                if (v(a.m) < 0.0) inadmissible = true;
            }
            double pairing = m.pair(i, j, v.eval);
            double lhs = v(block_average(g, i, j, f));
            double scale = std::max({1.0, std::abs(pairing), std::abs(lhs)});
            double margin = pairing - lhs;
            ++rep.cells_checked;
            rep.margins.push_back(margin);
            rep.tol = std::max(rep.tol, 1e-6 * scale);
            if (margin < -1e-6 * scale || inadmissible) ++rep.violations;
            if (std::abs(margin) > 1e-3 * scale || inadmissible)
                rep.equality_throughout = false;
        }
    return rep;
}

KPReport kp_report(const EmpiricalYoungMeasure& m, const GridMap& y,
                   const std::vector<EnergyDensitySpec>& suite) {
    m.validate();
    KPReport rep;
    rep.moment_deviation = moment_field(m, y).sup_deviation;
    rep.first_moment_ok = rep.moment_deviation <= 0.02;
    rep.jensen_ok = true;
    for (const auto& v : suite) {
        JensenReport jr = jensen_check(m, v, y);
        if (jr.violations > 0) rep.jensen_ok = false;
    }
    double area = m.cell_size() * m.cell_size();
    for (std::size_t j = 0; j < m.cells_y(); ++j)
        for (std::size_t i = 0; i < m.cells_x(); ++i)
            for (const Atom& a : m.atoms(i, j)) {
                double s = spectral_norm(a.m);
                rep.second_moment += a.w * s * s * area;
            }
    rep.second_moment_ok = std::isfinite(rep.second_moment);
    rep.all_ok = rep.first_moment_ok && rep.jensen_ok && rep.second_moment_ok;
    return rep;
}

}  // namespace qcplane
