#include "qcplane/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcplane {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double elliptic_K(double k) {
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    while (std::abs(a - b) > 1e-15 * a) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

// Descending Landen transformation; quadratic convergence, so the 1e-8
// stopping threshold yields full double accuracy.
void jacobi_sncndn(double u, double k, double& sn, double& cn, double& dn) {
    const double kCa = 1.0e-8;
    double emc = 1.0 - k * k;
    if (emc == 0.0) {
        cn = 1.0 / std::cosh(u);
        dn = cn;
        sn = std::tanh(u);
        return;
    }
    double em[14], en[14];
    double a = 1.0, c = 0.0;
    dn = 1.0;
    int l = 0;
    for (int i = 1; i <= 13; ++i) {
        l = i;
        em[i] = a;
        en[i] = (emc = std::sqrt(emc));
        c = 0.5 * (a + emc);
        if (std::abs(a - emc) <= kCa * a) break;
        emc *= a;
        a = c;
    }
    u *= c;
    sn = std::sin(u);
    cn = std::cos(u);
    if (sn != 0.0) {
        a = cn / sn;
        c *= a;
        for (int i = l; i >= 1; --i) {
            double b = em[i];
            a *= c;
            c *= dn;
            dn = (en[i] + a) / (b + a);
            a = c / b;
        }
        a = 1.0 / std::sqrt(c * c + 1.0);
        sn = (sn >= 0.0 ? a : -a);
        cn = c * sn;
    }
}

Cplx jacobi_sn(Cplx u, double k) {
    double kp = std::sqrt(1.0 - k * k);
    double sx, cx, dx, sy, cy, dy;
    jacobi_sncndn(u.real(), k, sx, cx, dx);
    jacobi_sncndn(u.imag(), kp, sy, cy, dy);
    double denom = cy * cy + k * k * sx * sx * sy * sy;
    if (denom == 0.0) return {kInf, kInf};
    return {sx * dy / denom, cx * dx * sy * cy / denom};
}

double square_modulus() {
    static const double k = [] {
        double lo = 1e-9, hi = 1.0 - 1e-9;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            double ratio = elliptic_K(std::sqrt(1.0 - mid * mid)) / elliptic_K(mid);
            (ratio > 2.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return k;
}

Cplx square_to_halfplane_point(Vec2 z) {
    double k = square_modulus();
    double K = elliptic_K(k);
    return jacobi_sn(Cplx{2.0 * K * (z.x - 0.5), 2.0 * K * z.y}, k);
}

GridMap square_to_halfplane(std::size_t resolution) {
    double h = 1.0 / double(resolution);
    GridMap m(Rect{0.0, 0.0, 1.0, 1.0}, h);
    for (std::size_t j = 0; j <= resolution; ++j) {
        for (std::size_t i = 0; i <= resolution; ++i) {
            Cplx w = square_to_halfplane_point(m.node_pos(i, j));
            bool ok = std::isfinite(w.real()) && std::isfinite(w.imag()) &&
                      std::abs(w.real()) <= 4.0 && w.imag() <= 4.0;
            if (ok)
                m.set(i, j, {w.real(), w.imag()});
            else
                m.mark_missing(i, j);
        }
    }
    m.set_analytic_tag("square_to_halfplane");
    return m;
}

}  // namespace qcplane
