#pragma once

// Shared sample maps for the test suites: radial power maps with known
// distortion, affine maps, conformal references, and seeded perturbed
// identities.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qcplane/geometry.hpp"
#include "qcplane/grid_map.hpp"
#include "qcplane/homeo1d.hpp"

namespace corpus {

using qcplane::GridMap;
using qcplane::Mat2;
using qcplane::Rect;
using qcplane::Vec2;

// x |x|^{1/K-1}: K-quasiconformal with distortion exactly K away from 0.
inline std::function<Vec2(Vec2)> radial(double K) {
    return [K](Vec2 p) {
        double r = p.norm();
        if (r == 0.0) return Vec2{0, 0};
        double s = std::pow(r, 1.0 / K - 1.0);
        return p * s;
    };
}

inline GridMap radial_grid(double K, Rect dom, double h) {
    return GridMap::sample(dom, h, radial(K), "radial-K" + std::to_string(int(K)));
}

inline GridMap affine_grid(const Mat2& A, Rect dom, double h) {
    return GridMap::sample(dom, h, [A](Vec2 p) { return A * p; }, "affine");
}

// Complex square z^2, conformal (distortion 1) away from 0.
inline Vec2 zsquare(Vec2 p) { return {p.x * p.x - p.y * p.y, 2.0 * p.x * p.y}; }

// Identity plus a fixed number of random low-frequency sinusoidal bumps.
// Amplitude small enough to keep the map a diffeomorphism.
inline std::function<Vec2(Vec2)> perturbed_identity(unsigned seed, double amp) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> freq(0.5, 2.5), phase(0.0, 6.28318);
    struct Bump {
        double ax, ay, fx, fy, px, py;
    };
    std::vector<Bump> bumps(3);
    for (auto& b : bumps) {
        b.fx = freq(rng);
        b.fy = freq(rng);
        b.px = phase(rng);
        b.py = phase(rng);
        b.ax = amp;
        b.ay = amp;
    }
    return [bumps](Vec2 p) {
        Vec2 q = p;
        for (const auto& b : bumps) {
            q.x += b.ax * std::sin(b.fx * p.x + b.py) * std::sin(b.fy * p.y + b.px);
            q.y += b.ay * std::cos(b.fy * p.x + b.px) * std::cos(b.fx * p.y + b.py);
        }
        return q;
    };
}

struct CorpusEntry {
    std::string name;
    GridMap map;
};

// Ten injective positive-determinant maps of varied distortion.
inline std::vector<CorpusEntry> ten_maps(double h = 1.0 / 64) {
    std::vector<CorpusEntry> v;
    Rect unit{0, 0, 1, 1};
    Rect off{0.25, 0.25, 1, 1};
    v.push_back({"affine-diag21", affine_grid(Mat2::diag(2, 1), unit, h)});
    v.push_back({"affine-shear", affine_grid(Mat2{1, 0.5, 0, 1}, unit, h)});
    v.push_back({"affine-rot-diag31",
                 affine_grid(Mat2{0.6, -0.8, 0.8, 0.6} * Mat2::diag(3, 1), unit, h)});
    v.push_back({"radial-2", radial_grid(2, off, h)});
    v.push_back({"radial-3", radial_grid(3, off, h)});
    v.push_back({"radial-5", radial_grid(5, off, h)});
    v.push_back({"zsquare", GridMap::sample(Rect{0.5, 0.5, 1, 1}, h, zsquare, "z2")});
    v.push_back({"wiggle-0",
                 GridMap::sample(unit, h, perturbed_identity(0, 0.02), "wiggle0")});
    v.push_back({"wiggle-1",
                 GridMap::sample(unit, h, perturbed_identity(1, 0.02), "wiggle1")});
    v.push_back({"expmap", GridMap::sample(unit, h,
                                           [](Vec2 p) {
                                               double e = std::exp(p.x);
                                               return Vec2{e * std::cos(p.y),
                                                           e * std::sin(p.y)};
                                           },
                                           "exp")});
    return v;
}

// Twenty (y, yk) pairs on [0,4]^2: smooth perturbed identities with yk a
// small extra wiggle away from y, satisfying the cut-off closeness
// hypotheses at eps = 1/8.
struct CutoffPair {
    GridMap y, yk;
};

inline CutoffPair cutoff_pair(unsigned seed, double h = 1.0 / 32) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> freq(0.5, 1.5), phase(0.0, 6.28318),
        inner_freq(2.0, 5.0);
    double f1 = freq(rng), f2 = freq(rng), p1 = phase(rng), p2 = phase(rng);
    double g1 = inner_freq(rng), g2 = inner_freq(rng), q1 = phase(rng), q2 = phase(rng);
    auto y = [=](Vec2 v) {
        return Vec2{v.x + 0.02 * std::sin(f1 * v.x + p1) * std::cos(f2 * v.y + p2),
                    v.y + 0.02 * std::cos(f2 * v.x + p2) * std::sin(f1 * v.y + p1)};
    };
    auto yk = [=](Vec2 v) {
        Vec2 u = y(v);
        u.x += 0.004 * std::sin(g1 * v.x + q1) * std::sin(g2 * v.y + q2);
        u.y += 0.004 * std::cos(g2 * v.x + q2) * std::cos(g1 * v.y + q1);
        return u;
    };
    Rect dom{0, 0, 4, 4};
    return {GridMap::sample(dom, h, y, ""), GridMap::sample(dom, h, yk, "")};
}

inline std::vector<CutoffPair> cutoff_pairs(std::size_t count = 20, double h = 1.0 / 32) {
    std::vector<CutoffPair> v;
    for (std::size_t s = 0; s < count; ++s) v.push_back(cutoff_pair(unsigned(s), h));
    return v;
}

// Ten 1-D homeomorphisms of varied modulus, [0,a] onto [0,b].
inline qcplane::Homeo1D sampled_homeo(double a, double b, std::size_t n,
                                      double (*f)(double)) {
    std::vector<double> t(n + 1), s(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        double u = double(i) / double(n);
        t[i] = a * u;
        s[i] = b * f(u);
    }
    return qcplane::Homeo1D(std::move(t), std::move(s));
}

inline std::vector<qcplane::Homeo1D> homeo_corpus() {
    using qcplane::Homeo1D;
    std::vector<Homeo1D> v;
    v.push_back(Homeo1D::identity(1.0));
    v.push_back(sampled_homeo(1, 1, 64, [](double u) { return u * u; }));
    v.push_back(sampled_homeo(1, 1, 64, [](double u) { return std::sqrt(u); }));
    v.push_back(sampled_homeo(1, 2, 64, [](double u) { return u * u * u; }));
    v.push_back(sampled_homeo(2, 1, 64, [](double u) { return std::pow(u, 0.75); }));
    v.push_back(sampled_homeo(1, 1, 64, [](double u) {
        return u + 0.4 * std::sin(6.28318 * u) * u * (1 - u);
    }));
    v.push_back(sampled_homeo(1, 3, 64, [](double u) {
        return (std::exp(2 * u) - 1) / (std::exp(2.0) - 1);
    }));
    v.push_back(sampled_homeo(3, 1, 64, [](double u) {
        return std::log1p(9 * u) / std::log(10.0);
    }));
    v.push_back(sampled_homeo(1, 1, 128, [](double u) {
        return u < 0.5 ? 0.75 * u : 0.375 + 1.25 * (u - 0.5);
    }));
    v.push_back(sampled_homeo(1, 1, 64, [](double u) { return 0.5 * u + 0.5 * u * u; }));
    return v;
}

}  // namespace corpus
