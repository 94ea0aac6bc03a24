#include "qcplane/homeo1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcplane {

Homeo1D::Homeo1D(std::vector<double> breakpoints, std::vector<double> values)
    : t_(std::move(breakpoints)), s_(std::move(values)) {
    validate();
}

Homeo1D Homeo1D::identity(double a) {
    return Homeo1D({0.0, 0.5 * a, a}, {0.0, 0.5 * a, a});
}

Homeo1D Homeo1D::from_function(double a, double b, std::size_t segments,
                               double (*f)(double)) {
    std::vector<double> t(segments + 1), s(segments + 1);
    double f0 = f(0.0), f1 = f(a);
    for (std::size_t i = 0; i <= segments; ++i) {
        t[i] = a * double(i) / double(segments);
        s[i] = b * (f(t[i]) - f0) / (f1 - f0);
    }
    t.back() = a;
    s.front() = 0.0;
    s.back() = b;
    return Homeo1D(std::move(t), std::move(s));
}

void Homeo1D::validate() const {
    if (t_.size() < 2 || t_.size() != s_.size())
        throw Error("NotIncreasing", "homeomorphism needs at least two samples");
    if (t_.front() != 0.0 || s_.front() != 0.0)
        throw Error("NotIncreasing", "left endpoint must be pinned at 0");
    for (std::size_t i = 1; i < t_.size(); ++i) {
        if (!(t_[i] > t_[i - 1]) || !(s_[i] > s_[i - 1]))
            throw Error("NotIncreasing",
                        "values must increase strictly at breakpoint " + std::to_string(i));
    }
    if (!std::isfinite(t_.back()) || !std::isfinite(s_.back()))
        throw Error("NotIncreasing", "endpoints must be finite");
}

double Homeo1D::operator()(double t) const {
    if (t <= t_.front()) return s_.front();
    if (t >= t_.back()) return s_.back();
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t k = std::size_t(it - t_.begin()) - 1;
    double w = (t - t_[k]) / (t_[k + 1] - t_[k]);
    return s_[k] + w * (s_[k + 1] - s_[k]);
}

double Homeo1D::inverse(double s) const {
    if (s <= s_.front()) return t_.front();
    if (s >= s_.back()) return t_.back();
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t k = std::size_t(it - s_.begin()) - 1;
    double w = (s - s_[k]) / (s_[k + 1] - s_[k]);
    return t_[k] + w * (t_[k + 1] - t_[k]);
}

double Homeo1D::slope(std::size_t seg) const {
    return (s_[seg + 1] - s_[seg]) / (t_[seg + 1] - t_[seg]);
}

double Homeo1D::integral(double t) const {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
        if (t <= t_[k]) break;
        double hi = std::min(t, t_[k + 1]);
        acc += 0.5 * ((*this)(t_[k]) + (*this)(hi)) * (hi - t_[k]);
    }
    return acc;
}

Homeo1D Homeo1D::normalized() const {
    double ia = 1.0 / a(), ib = 1.0 / b();
    std::vector<double> t(t_), s(s_);
    for (auto& v : t) v *= ia;
    for (auto& v : s) v *= ib;
    t.back() = 1.0;
    s.back() = 1.0;
    return Homeo1D(std::move(t), std::move(s));
}

Homeo1D Homeo1D::denormalized(double a, double b) const {
    std::vector<double> t(t_), s(s_);
    for (auto& v : t) v *= a;
    for (auto& v : s) v *= b;
    t.back() = a;
    s.back() = b;
    return Homeo1D(std::move(t), std::move(s));
}

double QSReport::eta(double t) const {
    if (eta_args.empty()) return t;
    if (t <= eta_args.front()) return eta_vals.front();
    if (t >= eta_args.back()) return eta_vals.back();
    auto it = std::upper_bound(eta_args.begin(), eta_args.end(), t);
    std::size_t k = std::size_t(it - eta_args.begin()) - 1;
    double w = (t - eta_args[k]) / (eta_args[k + 1] - eta_args[k]);
    return eta_vals[k] + w * (eta_vals[k + 1] - eta_vals[k]);
}

QSReport m_condition(const Homeo1D& s, unsigned grid_density) {
    s.validate();
    const double a = s.a();
    const std::size_t n = std::size_t(1) << grid_density;
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = s(a * double(i) / double(n));

    QSReport rep;
    // Symmetric difference-quotient scan: h runs over all grid multiples.
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t kmax = std::min(i, n - i);
        for (std::size_t k = 1; k <= kmax; ++k) {
            double num = v[i + k] - v[i];
            double den = v[i] - v[i - k];
            double ratio = std::max(num / den, den / num);
            if (ratio > rep.M) rep.M = ratio;
            if (rep.witnesses.size() < 8 || ratio > rep.witnesses.back().ratio) {
                rep.witnesses.push_back(
                    {a * double(i) / double(n), a * double(k) / double(n), ratio});
                std::sort(rep.witnesses.begin(), rep.witnesses.end(),
                          [](const QSWitness& x, const QSWitness& y) {
                              return x.ratio > y.ratio;
                          });
                if (rep.witnesses.size() > 8) rep.witnesses.resize(8);
            }
        }
    }

    // eta(t) from asymmetric triples (x, x+h, x+t*h), both orientations,
    // h over dyadic fractions of a including the full interval.
    for (int e = 20; e >= 0; --e) {
        double t = std::ldexp(1.0, -e);
        double worst = 0.0;
        for (unsigned m = 0; m <= grid_density; ++m) {
            double h = a * std::ldexp(1.0, -int(m));
            for (std::size_t i = 0; i + (n >> m) <= n; ++i) {
                double x = a * double(i) / double(n);
                double sx = v[i];
                {  // rightward triple
                    double denom = s(x + h) - sx;
                    if (denom > 0.0) worst = std::max(worst, (s(x + t * h) - sx) / denom);
                }
                double xr = a - x;  // leftward triple
                double sr = s(xr);
                double denom = sr - s(xr - h);
                if (denom > 0.0) worst = std::max(worst, (sr - s(xr - t * h)) / denom);
            }
        }
        rep.eta_args.push_back(t);
        rep.eta_vals.push_back(worst);
    }
    // Enforce monotonicity of the tabulated bound.
    for (std::size_t i = 1; i < rep.eta_vals.size(); ++i)
        rep.eta_vals[i] = std::max(rep.eta_vals[i], rep.eta_vals[i - 1]);
    return rep;
}

namespace {

// Smooth partition of unity: psi0 = 1 on [0,1/4], 0 on [3/4,1],
// exponential blend in between; psi1 = 1 - psi0.
double psi0(double t) {
    if (t <= 0.25) return 1.0;
    if (t >= 0.75) return 0.0;
    double e0 = std::exp(-1.0 / (0.75 - t));
    double e1 = std::exp(-1.0 / (t - 0.25));
    return e0 / (e0 + e1);
}

}  // namespace

Homeo1D fit_1d(const Homeo1D& s) {
    s.validate();
    const double a = s.a(), b = s.b();

    // Refined partition: breakpoints, the blend boundaries a/4 and 3a/4,
    // and extra subdivision inside the blend where the weights vary.
    std::vector<double> nodes(s.breakpoints());
    for (int i = 0; i <= 64; ++i) nodes.push_back(a * (0.25 + 0.5 * double(i) / 64.0));
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<double> out_t{0.0}, out_s{0.0};
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        double p = nodes[k], q = nodes[k + 1];
        if (q <= 0.25 * a) {
            acc = s(q);  // psi0 = 1 here: s-tilde coincides with s exactly
        } else if (p >= 0.75 * a) {
            acc += (q - p) * (b / a);  // psi1 = 1: slope b/a
        } else {
            // Composite Simpson with 64 subintervals on the smooth blend.
            double slope = (s(q) - s(p)) / (q - p);
            const int m = 64;
            double step = (q - p) / double(m);
            double sum = 0.0;
            for (int i = 0; i <= m; ++i) {
                double x = p + step * double(i);
                double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                double p0 = psi0(x / a);
                sum += w * (p0 * slope + (1.0 - p0) * (b / a));
            }
            acc += sum * step / 3.0;
        }
        out_t.push_back(q);
        out_s.push_back(acc);
    }
    // Image is [0, l] with l < (3/2) b.
    return Homeo1D(std::move(out_t), std::move(out_s));
}

Homeo1D reparam_join(const Homeo1D& r, const Homeo1D& s) {
    r.validate();
    s.validate();
    const double a = r.a(), b = r.b();
    if (std::abs(s.a() - a) > 1e-12 * a || std::abs(s.b() - b) > 1e-12 * b)
        throw Error("DomainMismatch", "join inputs must share domain and image");

    QSReport qr = m_condition(r), qs = m_condition(s);
    double d = 0.0;
    for (int e = 2; e <= 20; ++e) {
        double cand = std::ldexp(1.0, -e);
        if (std::max(qr.eta(cand), qs.eta(cand)) <= 0.25) {
            d = cand;
            break;
        }
    }
    if (d == 0.0)
        throw Error("NoValidD", "no dyadic d in (0,1/4] has eta(d) <= 1/4");

    const double c = d / 4.0 * a;  // join cut, kept well inside the eta bound
    std::vector<double> t, v;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r.breakpoints()[i] < c) {
            t.push_back(r.breakpoints()[i]);
            v.push_back(r.values()[i]);
        }
    }
    t.push_back(c);
    v.push_back(r(c));
    t.push_back(a - c);
    v.push_back(s(a - c));
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.breakpoints()[i] > a - c) {
            t.push_back(s.breakpoints()[i]);
            v.push_back(s.values()[i]);
        }
    }
    return Homeo1D(std::move(t), std::move(v));
}

BiHolderReport bi_holder_check(const Homeo1D& s) {
    Homeo1D u = s.normalized();
    const auto& t = u.breakpoints();
    const auto& v = u.values();
    const double l8 = std::log(8.0);

    BiHolderReport rep;
    double k1 = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            double dt = t[j] - t[i], ds = v[j] - v[i];
            if (ds >= 1.0 || dt >= 1.0) continue;
            double cand = std::log(ds) / (std::log(dt) - l8);
            k1 = std::max(k1, cand);
        }
    double k2 = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            double dt = t[j] - t[i], ds = v[j] - v[i];
            if (dt >= 1.0) continue;
            double cand = (std::log(ds) - k1 * l8) / std::log(dt);
            k2 = std::min(k2, cand);
        }
    rep.kappa1 = k1;
    rep.kappa2 = k2;
    rep.passes = std::isfinite(k1) && std::isfinite(k2) && k1 < 20.0 && k2 > 0.0;
    return rep;
}

}  // namespace qcplane
