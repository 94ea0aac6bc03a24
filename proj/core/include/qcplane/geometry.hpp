#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qcplane {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Lexicographic order, used for deterministic tie-breaking.
inline bool lex_less(Vec2 a, Vec2 b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

// 2x2 matrix, row-major: [a b; c d].
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 diag(double s, double t) { return {s, 0, 0, t}; }

    Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    double det() const { return a * d - b * c; }
    double frobenius2() const { return a * a + b * b + c * c + d * d; }

    Mat2 inverse() const {
        double dt = det();
        if (dt == 0.0) throw std::domain_error("Mat2::inverse: singular matrix");
        return Mat2{d, -b, -c, a} * (1.0 / dt);
    }

    bool finite() const {
        return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Singular values of a 2x2 matrix in closed form (eigenvalues of A^T A).
// Returns {sigma_max, sigma_min}; sigma_max is the spectral norm.
inline std::array<double, 2> singular_values(const Mat2& m) {
    double e = m.frobenius2();
    double dt = m.det();
    double disc = e * e - 4.0 * dt * dt;
    if (disc < 0.0) disc = 0.0;  // roundoff
    double root = std::sqrt(disc);
    double s1 = std::sqrt(0.5 * (e + root));
    double s2sq = 0.5 * (e - root);
    double s2 = s2sq > 0.0 ? std::sqrt(s2sq) : 0.0;
    return {s1, s2};
}

inline double spectral_norm(const Mat2& m) { return singular_values(m)[0]; }

// Distortion |A|^2/det(A) with |.| the spectral norm. Infinity when det <= 0.
inline double distortion_of(const Mat2& m) {
    double dt = m.det();
    if (dt <= 0.0) return std::numeric_limits<double>::infinity();
    double s = spectral_norm(m);
    return s * s / dt;
}

// Axis-aligned rectangle.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double w = 1.0;
    double h = 1.0;

    Vec2 lo() const { return {x0, y0}; }
    Vec2 hi() const { return {x0 + w, y0 + h}; }
    Vec2 center() const { return {x0 + 0.5 * w, y0 + 0.5 * h}; }
    bool contains(Vec2 p, double tol = 0.0) const {
        return p.x >= x0 - tol && p.x <= x0 + w + tol &&
               p.y >= y0 - tol && p.y <= y0 + h + tol;
    }
};

// Error taxonomy shared by all modules. `code` names the violated
// precondition or invariant; the CLI maps these to exit status 3.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

}  // namespace qcplane
