#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcplane/energy.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/young.hpp"

using namespace qcplane;

namespace {

const Mat2 kA = Mat2::identity();
const Mat2 kB = Mat2::diag(2, 1);  // rank-one connected to I
const double kLambda = 0.5;
const Rect kOmega{0, 0, 1, 1};

std::vector<GridMap> seq() {
    return laminate_sequence(kA, kB, kLambda, {8, 16, 32, 64}, kOmega);
}

}  // namespace

TEST_CASE("laminate gradients take only the two values") {
    GridMap m = laminate_map(kA, kB, kLambda, 16, kOmega);
    GradientField g = gradient_field(m);
    for (std::size_t j = 0; j < g.cells_y(); ++j)
        for (std::size_t i = 0; i < g.cells_x(); ++i) {
            const Mat2& M = g.at(i, j);
            double da = (M - kA).frobenius2(), db = (M - kB).frobenius2();
            CHECK(std::min(da, db) < 1e-18);
        }
}

TEST_CASE("non rank-one pairs are rejected") {
    CHECK_THROWS_AS(laminate_map(Mat2::identity(), Mat2::diag(2, 3), 0.5, 8, kOmega),
                    Error);
}

TEST_CASE("first moment matches and oscillation decays at rate 1/k") {
    Mat2 want = kA * kLambda + kB * (1 - kLambda);
    std::vector<double> devs;
    for (std::size_t k : {8, 16, 32, 64}) {
        GridMap m = laminate_map(kA, kB, kLambda, k, kOmega);
        GradientField g = gradient_field(m);
        Mat2 avg{0, 0, 0, 0};
        std::size_t cnt = 0;
        for (std::size_t j = 0; j < g.cells_y(); ++j)
            for (std::size_t i = 0; i < g.cells_x(); ++i) {
                avg = avg + g.at(i, j);
                ++cnt;
            }
        avg = avg * (1.0 / double(cnt));
        if (k == 64) CHECK(std::sqrt((avg - want).frobenius2()) < 0.02);
        // sup-norm distance to the affine limit: the weak-* rate O(1/k)
        double dev = 0.0;
        for (std::size_t j = 0; j < m.ny(); ++j)
            for (std::size_t i = 0; i < m.nx(); ++i)
                dev = std::max(dev, (m.value(i, j) - want * m.node_pos(i, j)).norm());
        devs.push_back(dev);
    }
    double slope = std::log2(devs.back() / devs.front()) / 3.0;
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("empirical measure is a probability measure in the cone") {
    EmpiricalYoungMeasure m = empirical_measure(seq());
    m.validate();
    SupportReport sup = support_check(m, 2.0);
    CHECK(sup.fraction_inside == doctest::Approx(1.0));
    CHECK(sup.worst_excess <= 1e-9);
}

TEST_CASE("support check flags atoms outside the cone") {
    EmpiricalYoungMeasure m(Rect{0, 0, 1, 1}, 1.0, 1, 1);
    m.atoms(0, 0).push_back({Mat2::diag(4, 1), 0.5});   // distortion 4
    m.atoms(0, 0).push_back({Mat2::identity(), 0.5});
    SupportReport sup = support_check(m, 2.0);
    CHECK(sup.fraction_inside == doctest::Approx(0.5));
    CHECK(sup.worst_excess > 0.0);
}

TEST_CASE("moment field matches block-averaged gradients") {
    auto s = seq();
    EmpiricalYoungMeasure m = empirical_measure(s);
    MomentReport mom = moment_field(m, s.back());
    CHECK(mom.sup_deviation < 1e-9);
}

TEST_CASE("determinant pairing equals determinant of the moment") {
    auto s = seq();
    EmpiricalYoungMeasure m = empirical_measure(s);
    Mat2 want = kA * kLambda + kB * (1 - kLambda);
    for (std::size_t j = 0; j < m.cells_y(); ++j)
        for (std::size_t i = 0; i < m.cells_x(); ++i) {
            if (m.atoms(i, j).empty()) continue;
            double pd = m.pair(i, j, [](const Mat2& A) { return A.det(); });
            CHECK(std::abs(pd - want.det()) < 1e-3);
        }
}

TEST_CASE("jensen direction across densities") {
    auto s = seq();
    EmpiricalYoungMeasure m = empirical_measure(s);
    const GridMap& y = s.back();

    JensenReport dirichlet = jensen_check(m, density_by_name("dirichlet"), y);
    CHECK(dirichlet.violations == 0);
    CHECK_FALSE(dirichlet.equality_throughout);  // strict convexity gap

    JensenReport det = jensen_check(m, density_by_name("det"), y);
    CHECK(det.violations == 0);
    CHECK(det.equality_throughout);  // null Lagrangian

    JensenReport neg = jensen_check(m, density_by_name("neg-det"), y);
    CHECK(neg.violations > 0);
}

TEST_CASE("kp report validates the laminate measure") {
    auto s = seq();
    EmpiricalYoungMeasure m = empirical_measure(s);
    KPReport kp = kp_report(m, s.back(), {density_by_name("det")});
    CHECK(kp.first_moment_ok);
    CHECK(kp.jensen_ok);
    CHECK(kp.second_moment_ok);
    CHECK(kp.all_ok);
}
