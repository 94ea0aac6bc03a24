#include "qcplane/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcplane/gradient.hpp"

namespace qcplane {

Vec2 BoundaryMap::square_point(double p) {
    p = std::fmod(p, 4.0);
    if (p < 0.0) p += 4.0;
    if (p < 1.0) return {p, 0.0};
    if (p < 2.0) return {1.0, p - 1.0};
    if (p < 3.0) return {3.0 - p, 1.0};
    return {0.0, 4.0 - p};
}

Vec2 BoundaryMap::at(double p) const {
    const std::size_t n = params.size();
    p = std::fmod(p - params[0], 4.0);
    if (p < 0.0) p += 4.0;
    p += params[0];
    auto it = std::upper_bound(params.begin(), params.end(), p);
    std::size_t k = (it == params.begin()) ? n - 1 : std::size_t(it - params.begin()) - 1;
    std::size_t k1 = (k + 1) % n;
    double span = params[k1] - params[k];
    if (k1 == 0) span += 4.0;
    double w = span > 0.0 ? (p - params[k]) / span : 0.0;
    return points[k] + (points[k1] - points[k]) * w;
}

BoundaryMap BoundaryMap::affine(const Mat2& A, Vec2 c, std::size_t m) {
    BoundaryMap b;
    for (std::size_t k = 0; k < 4 * m; ++k) {
        double p = double(k) / double(m);
        b.params.push_back(p);
        b.points.push_back(A * square_point(p) + c);
    }
    return b;
}

void BoundaryMap::validate() const {
    if (params.size() < 8 || params.size() != points.size())
        throw Error("NotQuasisymmetric", "boundary map needs at least 8 samples");
    for (std::size_t i = 1; i < params.size(); ++i)
        if (!(params[i] > params[i - 1]))
            throw Error("NotQuasisymmetric", "parameters must increase strictly");
    if (params.front() < 0.0 || params.back() >= 4.0)
        throw Error("NotQuasisymmetric", "parameters must lie in [0,4)");
    PlanarCurve curve{true, points};
    try {
        curve.validate();
    } catch (const Error&) {
        throw Error("ImageNotSimple", "boundary image curve is not simple");
    }
    double area = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        area += points[i].cross(points[(i + 1) % points.size()]);
    if (area <= 0.0)
        throw Error("NotQuasisymmetric", "boundary map reverses orientation");
}

namespace {

// Least-squares affine fit y ~ A q + c over sample pairs; returns the max
// residual.
double fit_affine(const std::vector<Vec2>& q, const std::vector<Vec2>& y,
                  Mat2& A, Vec2& c) {
    // Normal equations for the 3-parameter rows (a, b, c): basis (x, y, 1).
    double S[3][3] = {{0}}, rx[3] = {0}, ry[3] = {0};
    for (std::size_t i = 0; i < q.size(); ++i) {
        double v[3] = {q[i].x, q[i].y, 1.0};
        for (int r = 0; r < 3; ++r) {
            for (int s = 0; s < 3; ++s) S[r][s] += v[r] * v[s];
            rx[r] += v[r] * y[i].x;
            ry[r] += v[r] * y[i].y;
        }
    }
    // Gaussian elimination on the shared 3x3 system, two right-hand sides.
    double M[3][5];
    for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) M[r][s] = S[r][s];
        M[r][3] = rx[r];
        M[r][4] = ry[r];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        std::swap(M[col], M[piv]);
        if (M[col][col] == 0.0) return std::numeric_limits<double>::infinity();
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = M[r][col] / M[col][col];
            for (int s = col; s < 5; ++s) M[r][s] -= f * M[col][s];
        }
    }
    double px[3], py[3];
    for (int r = 0; r < 3; ++r) {
        px[r] = M[r][3] / M[r][r];
        py[r] = M[r][4] / M[r][r];
    }
    A = Mat2{px[0], px[1], py[0], py[1]};
    c = Vec2{px[2], py[2]};
    double worst = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        worst = std::max(worst, (A * q[i] + c - y[i]).norm());
    return worst;
}

}  // namespace

ExtensionResult extend_on_square(const BoundaryMap& b, std::size_t resolution) {
    b.validate();
    const std::size_t n = b.size();

    // Quasisymmetry of the data, arc length to arc length.
    std::vector<double> tt, vv;
    double acc = 0.0;
    tt.push_back(0.0);
    vv.push_back(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        tt.push_back(b.params[i % n] - b.params[0] + (i == n ? 4.0 : 0.0));
        acc += (b.points[i % n] - b.points[i - 1]).norm();
        vv.push_back(acc);
    }
    Homeo1D pullback(std::move(tt), std::move(vv));
    QSReport qs = m_condition(pullback);
    if (qs.M > 1e6)
        throw Error("NotQuasisymmetric",
                    "M-condition constant " + std::to_string(qs.M) + " exceeds 1e6");

    double diam = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            diam = std::max(diam, (b.points[i] - b.points[j]).norm());

    const double h = 1.0 / double(resolution);
    ExtensionResult res;
    res.boundary_M = qs.M;

    // Affine fast path: exactly affine data extends affinely.
    {
        std::vector<Vec2> q(n);
        for (std::size_t i = 0; i < n; ++i) q[i] = BoundaryMap::square_point(b.params[i]);
        Mat2 A;
        Vec2 c;
        double resid = fit_affine(q, b.points, A, c);
        if (resid <= 1e-9 * diam && A.det() > 0.0) {
            res.map = GridMap::sample(Rect{0, 0, 1, 1}, h,
                                      [&](Vec2 x) { return A * x + c; }, "affine");
            res.affine_fast_path = true;
            res.distortion_sup = distortion(gradient_field(res.map)).sup;
            return res;
        }
    }

    // Harmonic extension: exact boundary nodes, interior solves the 5-point
    // Laplace system per component. Affine data reproduces exactly (affine
    // functions are discrete-harmonic) and homeomorphic data onto a convex
    // image extends injectively (Rado-Kneser-Choquet at discrete scale).
    const std::size_t N = resolution;
    GridMap out(Rect{0, 0, 1, 1}, h);
    auto edge_param = [&](std::size_t i, std::size_t j) {
        Vec2 z = out.node_pos(i, j);
        if (j == 0) return z.x;
        if (i == N) return 1.0 + z.y;
        if (j == N) return 3.0 - z.x;
        return 4.0 - z.y;
    };
    std::vector<Vec2> u((N + 1) * (N + 1));
    auto at = [&](std::size_t i, std::size_t j) -> Vec2& { return u[j * (N + 1) + i]; };
    for (std::size_t j = 0; j <= N; ++j)
        for (std::size_t i = 0; i <= N; ++i)
            if (i == 0 || j == 0 || i == N || j == N) at(i, j) = b.at(edge_param(i, j));
    // Coons-patch seed for fast relaxation.
    for (std::size_t j = 1; j < N; ++j) {
        double y = double(j) / double(N);
        for (std::size_t i = 1; i < N; ++i) {
            double x = double(i) / double(N);
            at(i, j) = at(i, 0) * (1 - y) + at(i, N) * y + at(0, j) * (1 - x) +
                       at(N, j) * x -
                       (at(0, 0) * ((1 - x) * (1 - y)) + at(N, 0) * (x * (1 - y)) +
                        at(0, N) * ((1 - x) * y) + at(N, N) * (x * y));
        }
    }
    const double omega_sor = 2.0 / (1.0 + std::sin(3.14159265358979323846 * h));
    const double tol = 1e-13 * std::max(diam, 1.0);
    for (int sweep = 0; sweep < 100000; ++sweep) {
        double worst = 0.0;
        for (std::size_t j = 1; j < N; ++j) {
            for (std::size_t i = 1; i < N; ++i) {
                Vec2 avg = (at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1)) * 0.25;
                Vec2 delta = (avg - at(i, j)) * omega_sor;
                at(i, j) = at(i, j) + delta;
                worst = std::max(worst, std::max(std::abs(delta.x), std::abs(delta.y)));
            }
        }
        if (worst < tol) break;
    }
    for (std::size_t j = 0; j <= N; ++j)
        for (std::size_t i = 0; i <= N; ++i) out.set(i, j, at(i, j));
    out.set_analytic_tag("");
    res.map = std::move(out);
    res.distortion_sup = distortion(gradient_field(res.map)).sup;
    return res;
}

}  // namespace qcplane
