#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qcplane/homeo1d.hpp"

using namespace qcplane;

namespace {

Homeo1D sampled(double a, double b, std::size_t n, double (*f)(double)) {
    // f maps [0,1] onto [0,1] increasing; rescaled to [0,a] -> [0,b].
    std::vector<double> t(n + 1), s(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        double u = double(i) / double(n);
        t[i] = a * u;
        s[i] = b * f(u);
    }
    return Homeo1D(std::move(t), std::move(s));
}

std::vector<Homeo1D> homeo_corpus() {
    std::vector<Homeo1D> v;
    v.push_back(Homeo1D::identity(1.0));
    v.push_back(sampled(1, 1, 64, [](double u) { return u * u; }));
    v.push_back(sampled(1, 1, 64, [](double u) { return std::sqrt(u); }));
    v.push_back(sampled(1, 2, 64, [](double u) { return u * u * u; }));
    v.push_back(sampled(2, 1, 64, [](double u) { return std::pow(u, 0.75); }));
    v.push_back(sampled(1, 1, 64, [](double u) { return u + 0.1 * std::sin(6.28318 * u) * u * (1 - u) * 4; }));
    v.push_back(sampled(1, 3, 64, [](double u) { return (std::exp(2 * u) - 1) / (std::exp(2.0) - 1); }));
    v.push_back(sampled(3, 1, 64, [](double u) { return std::log1p(9 * u) / std::log(10.0); }));
    v.push_back(sampled(1, 1, 128, [](double u) { return u < 0.5 ? 0.75 * u : 0.375 + 1.25 * (u - 0.5); }));
    v.push_back(sampled(1, 1, 64, [](double u) { return 0.5 * u + 0.5 * u * u; }));
    return v;
}

}  // namespace

TEST_CASE("m_condition of the identity is 1") {
    QSReport qs = m_condition(Homeo1D::identity(1.0));
    CHECK(qs.M == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("m_condition detects asymmetry") {
    Homeo1D sq = sampled(1, 1, 256, [](double u) { return u * u; });
    QSReport qs = m_condition(sq);
    CHECK(qs.M > 1.5);
    // eta table is nondecreasing
    for (std::size_t i = 1; i < qs.eta_vals.size(); ++i)
        CHECK(qs.eta_vals[i] >= qs.eta_vals[i - 1]);
}

TEST_CASE("fit_1d of the identity is the identity") {
    Homeo1D id = Homeo1D::identity(1.0);
    Homeo1D f = fit_1d(id);
    for (double t : {0.0, 0.1, 0.25, 0.5, 0.77, 1.0})
        CHECK(f(t) == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("fit_1d contract on the homeomorphism corpus") {
    for (const Homeo1D& s : homeo_corpus()) {
        double a = s.a(), b = s.b();
        Homeo1D f = fit_1d(s);
        // exact on [0, a/4] at the original breakpoints
        for (std::size_t i = 0; i < s.size(); ++i) {
            double t = s.breakpoints()[i];
            if (t > a / 4 + 1e-15) break;
            CHECK(f(t) == doctest::Approx(s(t)).epsilon(1e-12));
        }
        // affine with slope b/a on [3a/4, a]
        double slope = (f(a) - f(0.75 * a)) / (0.25 * a);
        CHECK(std::abs(slope - b / a) < 1e-9);
        double mid = f(0.875 * a);
        CHECK(std::abs(mid - 0.5 * (f(0.75 * a) + f(a))) < 1e-9);
        // total image length below (3/2) b
        CHECK(f(a) < 1.5 * b);
        f.validate();
    }
}

TEST_CASE("reparam_join matches r near 0 and s near the end") {
    Homeo1D r = sampled(1, 1, 64, [](double u) { return u * u; });
    Homeo1D s = sampled(1, 1, 64, [](double u) { return std::sqrt(u); });
    Homeo1D j = reparam_join(r, s);
    j.validate();
    CHECK(j(0.0) == doctest::Approx(r(0.0)));
    double d = 1e-3;
    CHECK(j(d) == doctest::Approx(r(d)).epsilon(1e-6));
    CHECK(j(1.0) == doctest::Approx(s(1.0)));
}

TEST_CASE("bi-holder bounds hold for mild homeomorphisms") {
    for (const Homeo1D& s : homeo_corpus()) {
        BiHolderReport rep = bi_holder_check(s);
        CHECK(rep.passes);
        CHECK(rep.kappa1 <= 20.0);
    }
}

TEST_CASE("homeo validation rejects non-monotone data") {
    CHECK_THROWS_AS(Homeo1D({0.0, 0.5, 1.0}, {0.0, 0.6, 0.4}).validate(), Error);
}

TEST_CASE("normalized and denormalized round-trip") {
    Homeo1D s = sampled(2, 3, 32, [](double u) { return u * u; });
    Homeo1D n = s.normalized();
    CHECK(n.a() == doctest::Approx(1.0));
    CHECK(n.b() == doctest::Approx(1.0));
    Homeo1D back = n.denormalized(2, 3);
    for (double t : {0.0, 0.4, 1.1, 2.0})
        CHECK(back(t) == doctest::Approx(s(t)).epsilon(1e-12));
}
