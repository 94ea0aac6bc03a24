#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "corpus.hpp"
#include "qcplane/curve.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/io.hpp"

using namespace qcplane;

TEST_CASE("grid map json round-trip is exact") {
    GridMap m = corpus::affine_grid(Mat2{1.25, 0.5, -0.75, 2}, Rect{0, 0, 1, 1}, 0.25);
    m.mark_missing(2, 2);
    GridMap back = io::grid_map_from_json(io::to_json(m));
    CHECK(back.spacing() == m.spacing());
    for (std::size_t j = 0; j < m.ny(); ++j)
        for (std::size_t i = 0; i < m.nx(); ++i) {
            CHECK(back.defined(i, j) == m.defined(i, j));
            if (!m.defined(i, j)) continue;
            CHECK(back.value(i, j).x == m.value(i, j).x);
            CHECK(back.value(i, j).y == m.value(i, j).y);
        }
}

TEST_CASE("schema violations raise SchemaError") {
    CHECK_THROWS_AS(io::grid_map_from_json(nlohmann::json{{"spacing", 0.5}}),
                    io::SchemaError);
    CHECK_THROWS_AS(io::homeo_from_json(nlohmann::json{{"a", 1.0}}), io::SchemaError);
    nlohmann::json bad = {{"a", 1.0},
                          {"b", 2.0},
                          {"breakpoints", {0.0, 0.5, 1.0}},
                          {"values", {0.0, 0.5, 1.5}}};  // b mismatch
    CHECK_THROWS_AS(io::homeo_from_json(bad), io::SchemaError);
}

TEST_CASE("homeo and curve round-trips") {
    Homeo1D s({0.0, 0.25, 1.0}, {0.0, 0.5, 2.0});
    Homeo1D hs = io::homeo_from_json(io::to_json(s));
    CHECK(hs(0.25) == s(0.25));

    PlanarCurve c = circle_curve(Vec2{0, 0}, 1.0, 32);
    PlanarCurve back = io::curve_from_json(io::to_json(c));
    CHECK(back.closed);
    CHECK(back.vertices.size() == c.vertices.size());
}

TEST_CASE("young measure round-trip preserves atoms") {
    EmpiricalYoungMeasure m(Rect{0, 0, 1, 1}, 0.5, 2, 2);
    m.atoms(0, 0).push_back({Mat2::identity(), 0.5});
    m.atoms(0, 0).push_back({Mat2::diag(2, 1), 0.5});
    EmpiricalYoungMeasure back = io::measure_from_json(io::to_json(m));
    CHECK(back.cells_x() == 2);
    REQUIRE(back.atoms(0, 0).size() == 2);
    CHECK(back.atoms(0, 0)[1].m.a == 2.0);
    CHECK(back.atoms(1, 1).empty());
}

TEST_CASE("csv outputs are rfc-4180 with crlf") {
    GridMap m = corpus::affine_grid(Mat2::diag(2, 1), Rect{0, 0, 1, 1}, 0.5);
    std::string csv = io::distortion_csv(distortion(gradient_field(m)));
    CHECK(csv.find("cell_i,cell_j,distortion,det\r\n") == 0);
    CHECK(csv.find("\r\n") != std::string::npos);
    // every line ends with CRLF
    CHECK(csv.rfind("\r\n") == csv.size() - 2);
}

TEST_CASE("numbers serialize deterministically") {
    CHECK(io::num(0.1) == "0.1");
    CHECK(io::num(1.0) == "1");
    CHECK(io::num(1.0 / 3.0) == io::num(1.0 / 3.0));
}

TEST_CASE("svg heatmap is self-contained") {
    GridMap m = corpus::affine_grid(Mat2::diag(2, 1), Rect{0, 0, 1, 1}, 0.25);
    std::string svg = io::svg_heatmap(m);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("href=") == std::string::npos);  // no external references
}

TEST_CASE("quasicircle constants for reference curves") {
    QuasicircleReport circ = quasicircle_constant(circle_curve(Vec2{0, 0}, 1.0, 256));
    CHECK(circ.c_best == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    double c1 = quasicircle_constant(cusp_curve(128)).c_best;
    double c2 = quasicircle_constant(cusp_curve(512)).c_best;
    CHECK(c2 > 3.0 * c1);
}
