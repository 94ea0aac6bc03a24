#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corpus.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/grid_map.hpp"
#include "qcplane/planar_maps.hpp"

using namespace qcplane;

TEST_CASE("affine distortion is exact") {
    GridMap m = corpus::affine_grid(Mat2::diag(2, 1), Rect{0, 0, 1, 1}, 1.0 / 16);
    DistortionReport rep = distortion(gradient_field(m));
    CHECK(rep.sup == doctest::Approx(2.0).epsilon(1e-12));
    for (const auto& c : rep.cells) CHECK(c.distortion == doctest::Approx(2.0));
}

TEST_CASE("radial maps report distortion K") {
    for (double K : {2.0, 3.0, 5.0}) {
        GridMap m = corpus::radial_grid(K, Rect{0.25, 0.25, 1, 1}, 1.0 / 64);
        DistortionReport rep = distortion(gradient_field(m));
        CHECK(rep.degenerate_fraction == 0.0);
        for (const auto& c : rep.cells)
            CHECK(std::abs(c.distortion - K) / K < 0.01);
    }
}

TEST_CASE("identity gradient and eval") {
    GridMap m = corpus::affine_grid(Mat2::identity(), Rect{0, 0, 1, 1}, 0.25);
    GradientField g = gradient_field(m);
    for (std::size_t j = 0; j < g.cells_y(); ++j)
        for (std::size_t i = 0; i < g.cells_x(); ++i) {
            CHECK(g.at(i, j).a == doctest::Approx(1.0));
            CHECK(g.at(i, j).b == doctest::Approx(0.0));
        }
    Vec2 p{0.3, 0.7};
    Vec2 v = m.eval(p);
    CHECK(v.x == doctest::Approx(p.x));
    CHECK(v.y == doctest::Approx(p.y));
}

TEST_CASE("inverse distortion law on the corpus") {
    for (const auto& e : corpus::ten_maps(1.0 / 64)) {
        double K = distortion(gradient_field(e.map)).sup;
        GridMap inv = invert(e.map);
        DistortionReport rep = distortion(gradient_field(inv));
        INFO(e.name);
        CHECK(rep.sup <= K * 1.1);
    }
}

TEST_CASE("composition distortion law") {
    Rect unit{0, 0, 1, 1};
    double h = 1.0 / 64;
    // Outer maps on a widened domain so inner images stay inside.
    GridMap outer1 = corpus::affine_grid(Mat2::diag(2, 1), Rect{-3, -3, 9, 9}, h);
    GridMap outer2 = GridMap::sample(Rect{-3, -3, 9, 9}, h,
                                     corpus::perturbed_identity(7, 0.02), "");
    for (const auto& e : corpus::ten_maps(h)) {
        for (const GridMap* outer : {&outer1, &outer2}) {
            double K1 = distortion(gradient_field(*outer)).sup;
            double K2 = distortion(gradient_field(e.map)).sup;
            GridMap comp = compose(*outer, e.map);
            DistortionReport rep = distortion(gradient_field(comp));
            INFO(e.name);
            CHECK(rep.sup <= K1 * K2 * 1.1);
        }
    }
}

TEST_CASE("invert then compose is near-identity") {
    GridMap m = corpus::affine_grid(Mat2::diag(2, 1), Rect{0, 0, 1, 1}, 1.0 / 32);
    GridMap inv = invert(m);
    GridMap round = compose(inv, m);
    double worst = 0.0;
    for (std::size_t j = 0; j < round.ny(); ++j)
        for (std::size_t i = 0; i < round.nx(); ++i) {
            if (!round.defined(i, j)) continue;
            worst = std::max(worst, (round.value(i, j) - round.node_pos(i, j)).norm());
        }
    CHECK(worst < 2.0 / 32);
}

TEST_CASE("ciarlet-necas equality for injective maps") {
    for (const auto& e : corpus::ten_maps(1.0 / 64)) {
        CiarletNecasReport cn = ciarlet_necas(e.map);
        INFO(e.name);
        CHECK(cn.satisfied);
        CHECK(std::abs(cn.lhs - cn.rhs) < 5.0 / 64 * std::max(1.0, cn.rhs));
    }
}

TEST_CASE("ciarlet-necas violation for the doubly covering square") {
    GridMap m = GridMap::sample(Rect{-1, -1, 2, 2}, 1.0 / 32, corpus::zsquare, "z2");
    CiarletNecasReport cn = ciarlet_necas(m);
    CHECK_FALSE(cn.satisfied);
    CHECK(cn.lhs / cn.rhs >= 1.5);
}

TEST_CASE("multiplicity counts coverings") {
    GridMap one = corpus::affine_grid(Mat2::identity(), Rect{0, 0, 1, 1}, 1.0 / 16);
    CHECK(multiplicity(one, Vec2{0.53, 0.41}) == 1);
    GridMap two = GridMap::sample(Rect{-1, -1, 2, 2}, 1.0 / 32, corpus::zsquare, "z2");
    CHECK(multiplicity(two, Vec2{0.25, 0.25}) == 2);
}

TEST_CASE("noninjective node sample rejects inversion") {
    GridMap m = GridMap::sample(Rect{-1, -1, 2, 2}, 1.0 / 16,
                                [](Vec2 p) { return Vec2{p.x * p.x, p.y}; }, "");
    CHECK_THROWS_AS(invert(m), Error);
}

TEST_CASE("glue redefines disjoint boxes and verifies boundaries") {
    GridMap base = corpus::affine_grid(Mat2::identity(), Rect{0, 0, 1, 1}, 0.125);
    // A piece over cells [2,3]x[2,3] agreeing with base on the box boundary.
    GridMap piece(Rect{0.25, 0.25, 0.25, 0.25}, 0.125);
    for (std::size_t j = 0; j <= 2; ++j)
        for (std::size_t i = 0; i <= 2; ++i) {
            Vec2 p = piece.node_pos(i, j);
            Vec2 v = p;
            if (i == 1 && j == 1) v += Vec2{0.01, -0.01};  // interior tweak
            piece.set(i, j, v);
        }
    GridMap glued = glue(base, {{CellBox{2, 2, 3, 3}, piece}});
    CHECK(glued.value(3, 3).x == doctest::Approx(0.385));
    CHECK(glued.value(0, 0).x == doctest::Approx(0.0));
    // Mismatched boundary is rejected.
    piece.set(0, 0, Vec2{9, 9});
    CHECK_THROWS_AS(glue(base, {{CellBox{2, 2, 3, 3}, piece}}), Error);
}

TEST_CASE("higher integrability brackets the exponent threshold") {
    // K = 3 radial map: integral of |grad f|^p near 0 converges for
    // p = 2.5 and diverges like h^{-1/3} for p = 3.5.
    auto quad = [](double h, double p) {
        GridMap m = corpus::radial_grid(3, Rect{-0.125, -0.125, 0.25, 0.25}, h);
        GradientField g = gradient_field(m);
        double acc = 0.0;
        for (std::size_t j = 0; j < g.cells_y(); ++j)
            for (std::size_t i = 0; i < g.cells_x(); ++i)
                acc += h * h * std::pow(spectral_norm(g.at(i, j)), p);
        return acc;
    };
    double a0 = quad(1.0 / 64, 2.5), a1 = quad(1.0 / 128, 2.5), a2 = quad(1.0 / 256, 2.5);
    CHECK(a2 < a0 * 1.5);  // bounded under refinement
    CHECK(std::abs(a2 - a1) < std::abs(a1 - a0));
    double b0 = quad(1.0 / 64, 3.5), b1 = quad(1.0 / 128, 3.5), b2 = quad(1.0 / 256, 3.5);
    CHECK(b1 > b0);
    CHECK(b2 > b1);  // monotone growth
}
