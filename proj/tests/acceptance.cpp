// Acceptance harness: one pass/fail line per criterion. Exit 0 iff all pass.
// argv[1] is the path to the qcplane CLI binary (used by the determinism
// criterion); when omitted that criterion is reported as FAIL.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "qcplane/beurling.hpp"
#include "qcplane/curve.hpp"
#include "qcplane/cutoff.hpp"
#include "qcplane/energy.hpp"
#include "qcplane/extension.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/grid_map.hpp"
#include "qcplane/homeo1d.hpp"
#include "qcplane/io.hpp"
#include "qcplane/planar_maps.hpp"
#include "qcplane/young.hpp"

using namespace qcplane;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

struct Check {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// ---------------------------------------------------------------- criterion 1

void distortion_exactness() {
    Check c;
    GridMap aff = corpus::affine_grid(Mat2::diag(2, 1), Rect{0, 0, 1, 1}, 1.0 / 64);
    DistortionReport rep = distortion(gradient_field(aff));
    for (const DistortionCell& cell : rep.cells)
        if (cell.distortion != 2.0) {
            c.require(false, "affine cell distortion " + fmt(cell.distortion));
            break;
        }
    for (double K : {2.0, 3.0, 5.0}) {
        GridMap m = corpus::radial_grid(K, Rect{0.25, 0.25, 1, 1}, 1.0 / 64);
        DistortionReport r = distortion(gradient_field(m));
        double worst = 0.0;
        for (const DistortionCell& cell : r.cells)
            worst = std::max(worst, std::abs(cell.distortion - K) / K);
        c.require(worst <= 0.01, "radial K=" + fmt(K) + " rel err " + fmt(worst));
    }
    report("distortion-exactness", c.ok, c.detail);
}

// ---------------------------------------------------------------- criterion 2

void inverse_composition_laws() {
    Check c;
    Rect big{-3, -3, 9, 9};
    GridMap outer = corpus::affine_grid(Mat2::diag(2, 1), big, 1.0 / 16);
    for (const corpus::CorpusEntry& e : corpus::ten_maps()) {
        double K = distortion(gradient_field(e.map)).sup;
        GridMap inv = invert(e.map);
        double Kinv = distortion(gradient_field(inv)).sup;
        c.require(Kinv <= K * 1.1,
                  e.name + " inverse " + fmt(Kinv) + " > " + fmt(K * 1.1));
        GridMap comp = compose(outer, e.map);
        double Kc = distortion(gradient_field(comp)).sup;
        c.require(Kc <= 2.0 * K * 1.1,
                  e.name + " composition " + fmt(Kc) + " > " + fmt(2 * K * 1.1));
    }
    report("inverse-composition-laws", c.ok, c.detail);
}

// ---------------------------------------------------------------- criterion 3

// Quadrature of |grad f|^p for the K=3 radial map over [-R,R]^2 by quadrant
// symmetry (the origin is a lattice node, so cells reflect onto cells).
std::pair<double, double> radial_integrals(std::size_t m) {
    const double R = 1.0 / 32;
    const double h = R / double(m);
    auto f = corpus::radial(3.0);
    double s25 = 0.0, s35 = 0.0;
    const std::size_t rows_per = 128;
    for (std::size_t j0 = 0; j0 < m; j0 += rows_per) {
        std::size_t rows = std::min(rows_per, m - j0);
        GridMap strip = GridMap::sample(Rect{0.0, double(j0) * h, R, double(rows) * h},
                                        h, f, "");
        GradientField g = gradient_field(strip);
        for (std::size_t j = 0; j < g.cells_y(); ++j)
            for (std::size_t i = 0; i < g.cells_x(); ++i) {
                double s = spectral_norm(g.at(i, j));
                double t = std::pow(s, 2.5);
                s25 += t;
                s35 += t * s;
            }
    }
    return {4.0 * h * h * s25, 4.0 * h * h * s35};
}

void integrability_threshold() {
    Check c;
    std::vector<std::size_t> levels{16, 128, 1024, 12288};
    std::vector<double> I25, I35;
    for (std::size_t m : levels) {
        auto [a, b] = radial_integrals(m);
        I25.push_back(a);
        I35.push_back(b);
    }
    c.require(I25.back() <= 1.5 * I25.front(),
              "p=2.5 grew " + fmt(I25.back() / I25.front()) + "x");
    for (std::size_t i = 1; i < I35.size(); ++i)
        c.require(I35[i] > I35[i - 1], "p=3.5 not monotone at level " + fmt(double(i)));
    double growth = I35.back() / I35.front();
    c.require(growth > 10.0, "p=3.5 growth " + fmt(growth) + "x <= 10x");
    report("integrability-threshold", c.ok,
           c.ok ? "p=3.5 growth " + fmt(growth) + "x, p=2.5 ratio " +
                      fmt(I25.back() / I25.front())
                : c.detail);
}

// ---------------------------------------------------------------- criterion 4

void ciarlet_necas_criterion() {
    Check c;
    double h = 1.0 / 64;
    std::vector<std::string> injective{"affine-diag21", "affine-shear", "radial-2",
                                       "wiggle-0", "expmap"};
    for (const corpus::CorpusEntry& e : corpus::ten_maps(h)) {
        bool wanted = false;
        for (const std::string& n : injective) wanted |= (n == e.name);
        if (!wanted) continue;
        CiarletNecasReport cn = ciarlet_necas(e.map);
        c.require(std::abs(cn.lhs - cn.rhs) <= 5 * h,
                  e.name + " |lhs-rhs|=" + fmt(std::abs(cn.lhs - cn.rhs)));
        c.require(cn.satisfied, e.name + " not satisfied");
    }
    GridMap folded = GridMap::sample(Rect{-1, -1, 2, 2}, h, corpus::zsquare, "z2");
    CiarletNecasReport cn = ciarlet_necas(folded);
    double ratio = cn.lhs / cn.rhs;
    c.require(ratio >= 1.5, "z^2 violation ratio " + fmt(ratio));
    report("ciarlet-necas", c.ok, c.detail);
}

// ---------------------------------------------------------------- criterion 5

void fitting_1d() {
    Check c;
    Homeo1D id = Homeo1D::identity(1.0);
    Homeo1D fid = fit_1d(id);
    for (double t : {0.0, 0.2, 0.5, 0.9, 1.0})
        c.require(std::abs(fid(t) - t) <= 1e-12, "fit_1d(id) off at " + fmt(t));
    for (const Homeo1D& s : corpus::homeo_corpus()) {
        double a = s.a(), b = s.b();
        Homeo1D f = fit_1d(s);
        for (std::size_t i = 0; i < s.size(); ++i) {
            double t = s.breakpoints()[i];
            if (t > a / 4 + 1e-15) break;
            c.require(std::abs(f(t) - s(t)) <= 1e-12, "not exact on [0,a/4]");
        }
        double slope = (f(a) - f(0.75 * a)) / (0.25 * a);
        c.require(std::abs(slope - b / a) < 1e-9, "tail slope " + fmt(slope));
        double mid = f(0.875 * a);
        c.require(std::abs(mid - 0.5 * (f(0.75 * a) + f(a))) < 1e-9, "tail not affine");
        c.require(f(a) < 1.5 * b, "image length " + fmt(f(a)) + " >= 1.5b");
    }
    report("1d-fitting", c.ok, c.detail);
}

// ----------------------------------------------------- criteria 6 and 7

void cutoff_criteria() {
    Check bridges, contract;
    std::size_t pair_idx = 0;
    for (const corpus::CutoffPair& pair : corpus::cutoff_pairs(20)) {
        std::string tag = "pair " + std::to_string(pair_idx++);
        CutoffResult cut = assemble_cutoff(pair.y, pair.yk, 0.125);
        double eps = cut.report.eps, delta = cut.report.delta;
        bridges.require(!cut.bridge_list.empty(), tag + " has no bridges");
        for (const Bridge& b : cut.bridge_list) {
            bridges.require(b.r > eps / 2 - delta / 2 && b.r < eps / 2 + delta / 2,
                            tag + " r=" + fmt(b.r) + " outside window");
            bridges.require(b.midpoint_deviation < std::sqrt(7 * eps * delta),
                            tag + " midpoint dev " + fmt(b.midpoint_deviation));
            if (!bridges.ok) break;
        }
        const CutoffReport& r = cut.report;
        contract.require(r.boundary_exact, tag + " boundary trace not exact");
        contract.require(r.sup_y_omega <= r.bound,
                         tag + " sup|y-omega|=" + fmt(r.sup_y_omega));
        contract.require(r.modified_measure <= cut.partition.modified_measure + 1e-12,
                         tag + " modified measure above shell");
        contract.require(r.multiplicity_one, tag + " multiplicity > 1");
        contract.require(r.ciarlet_necas_ok, tag + " CN violated");
    }
    QSReport eta = m_condition(Homeo1D::identity(1.0));
    Partition p1 = partition_domain(Rect{0, 0, 4, 4}, 0.125, eta);
    Partition p2 = partition_domain(Rect{0, 0, 4, 4}, 0.0625, eta);
    double ratio = p2.modified_measure / p1.modified_measure;
    contract.require(ratio > 0.35 && ratio < 0.65,
                     "halving ratio " + fmt(ratio) + " not ~1/2");
    report("bridge-bounds", bridges.ok, bridges.detail);
    report("cutoff-contract", contract.ok, contract.detail);
}

// ---------------------------------------------------------------- criterion 8

void young_measure_laws() {
    Check c;
    Mat2 A = Mat2::identity(), B = Mat2::diag(2, 1);
    double lambda = 0.5;
    Mat2 M{lambda * A.a + (1 - lambda) * B.a, lambda * A.b + (1 - lambda) * B.b,
           lambda * A.c + (1 - lambda) * B.c, lambda * A.d + (1 - lambda) * B.d};
    std::vector<std::size_t> ks{8, 16, 32, 64};
    std::vector<GridMap> seq = laminate_sequence(A, B, lambda, ks, Rect{0, 0, 1, 1});

    // first moment of the k=64 member
    GradientField g = gradient_field(seq.back());
    Mat2 avg{0, 0, 0, 0};
    std::size_t n = 0;
    for (std::size_t j = 0; j < g.cells_y(); ++j)
        for (std::size_t i = 0; i < g.cells_x(); ++i) {
            const Mat2& m = g.at(i, j);
            avg.a += m.a;
            avg.b += m.b;
            avg.c += m.c;
            avg.d += m.d;
            ++n;
        }
    avg.a /= double(n);
    avg.b /= double(n);
    avg.c /= double(n);
    avg.d /= double(n);
    double moment_err = std::max(std::max(std::abs(avg.a - M.a), std::abs(avg.b - M.b)),
                                 std::max(std::abs(avg.c - M.c), std::abs(avg.d - M.d)));
    c.require(moment_err <= 0.02, "k=64 moment err " + fmt(moment_err));

    // O(1/k): sup-norm deviation of u_k from the affine moment map
    std::vector<double> devs;
    for (const GridMap& m : seq) {
        double dev = 0.0;
        for (std::size_t j = 0; j < m.ny(); ++j)
            for (std::size_t i = 0; i < m.nx(); ++i) {
                Vec2 p = m.node_pos(i, j);
                Vec2 want = M * p;
                Vec2 got = m.value(i, j);
                dev = std::max(dev, std::max(std::abs(got.x - want.x),
                                             std::abs(got.y - want.y)));
            }
        devs.push_back(dev);
    }
    double slope = std::log2(devs.back() / devs.front()) / 3.0;
    c.require(std::abs(slope + 1.0) <= 0.2, "sup-deviation slope " + fmt(slope));

    // measure-side laws
    EmpiricalYoungMeasure meas = empirical_measure(seq);
    SupportReport sup = support_check(meas, 2.0);
    c.require(sup.fraction_inside == 1.0,
              "support fraction " + fmt(sup.fraction_inside));
    EnergyDensitySpec det_v = density_by_name("det");
    for (std::size_t j = 0; j < meas.cells_y(); ++j)
        for (std::size_t i = 0; i < meas.cells_x(); ++i) {
            double pairing = meas.pair(i, j, det_v);
            double want = meas.first_moment(i, j).det();
            if (std::abs(pairing - want) > 1e-3) {
                c.require(false, "<nu,det> off by " + fmt(pairing - want));
                j = meas.cells_y();
                break;
            }
        }
    report("young-measure-laws", c.ok, c.detail);
}

// ---------------------------------------------------------------- criterion 9

void jensen_lsc_direction() {
    Check c;
    struct Corpus {
        Mat2 A, B;
        double lambda;
        std::string name;
    };
    std::vector<Corpus> corpora{
        {Mat2::identity(), Mat2::diag(2, 1), 0.5, "I/diag21"},
        {Mat2::identity(), Mat2::diag(2, 1), 1.0 / 3.0, "I/diag21-third"},
        {Mat2::identity(), Mat2::diag(3, 1), 0.5, "I/diag31"}};
    for (const Corpus& cp : corpora) {
        Mat2 M{cp.lambda * cp.A.a + (1 - cp.lambda) * cp.B.a,
               cp.lambda * cp.A.b + (1 - cp.lambda) * cp.B.b,
               cp.lambda * cp.A.c + (1 - cp.lambda) * cp.B.c,
               cp.lambda * cp.A.d + (1 - cp.lambda) * cp.B.d};
        std::vector<GridMap> seq =
            laminate_sequence(cp.A, cp.B, cp.lambda, {8, 16, 32, 64}, Rect{0, 0, 1, 1});
        GridMap limit = GridMap::sample(Rect{0, 0, 1, 1}, 1.0 / 64,
                                        [M](Vec2 p) { return M * p; }, "affine");
        // Coarsening 6 is a multiple of both laminate periods (2 and 3), so
        // every coarse block carries the exact snapped volume fractions.
        EmpiricalYoungMeasure meas = empirical_measure(seq, 6);
        JensenReport dir = jensen_check(meas, density_by_name("dirichlet"), limit);
        c.require(dir.violations == 0, cp.name + " |A|^2 violated");
        double min_margin = dir.margins.empty() ? 0.0 : dir.margins[0];
        for (double m : dir.margins) min_margin = std::min(min_margin, m);
        c.require(min_margin > 0.05,
                  cp.name + " |A|^2 gap " + fmt(min_margin) + " not positive");
        JensenReport det = jensen_check(meas, density_by_name("det"), limit);
        c.require(det.violations == 0 && det.equality_throughout,
                  cp.name + " det not an equality");
        JensenReport neg = jensen_check(meas, density_by_name("neg-det"), limit);
        c.require(neg.violations > 0, cp.name + " -det not flagged");
    }
    report("jensen-lsc-direction", c.ok, c.detail);
}

// --------------------------------------------------------------- criterion 10

void quasicircle_constants() {
    Check c;
    double circ = quasicircle_constant(circle_curve(Vec2{0, 0}, 1.0, 256)).c_best;
    c.require(std::abs(circ - std::sqrt(2.0)) <= 0.02, "circle " + fmt(circ));
    double c0 = quasicircle_constant(cusp_curve(128)).c_best;
    double c2 = quasicircle_constant(cusp_curve(512)).c_best;
    c.require(c2 > 3.0 * c0,
              "cusp growth " + fmt(c2 / c0) + "x over two refinements");
    report("quasicircle-constants", c.ok,
           c.ok ? "circle " + fmt(circ) + ", cusp growth " + fmt(c2 / c0) + "x"
                : c.detail);
}

// --------------------------------------------------------------- criterion 11

void ba_identity_law() {
    Check c;
    GridMap F = beurling_ahlfors(Homeo1D::identity(1.0), 64);
    double worst = 0.0;
    for (std::size_t j = 0; j < F.ny(); ++j)
        for (std::size_t i = 0; i < F.nx(); ++i) {
            Vec2 p = F.node_pos(i, j);
            Vec2 v = F.value(i, j);
            worst = std::max(worst, std::max(std::abs(v.x - p.x),
                                             std::abs(v.y - p.y / 2)));
        }
    c.require(worst <= 1e-9, "identity deviation " + fmt(worst));
    for (const Homeo1D& s : corpus::homeo_corpus()) {
        GridMap G = beurling_ahlfors(s, 64);
        for (std::size_t i = 0; i < G.nx(); ++i) {
            Vec2 p = G.node_pos(i, 0);
            Vec2 v = G.value(i, 0);
            if (v.x != s(p.x) || v.y != 0.0) {
                c.require(false, "boundary trace not exact at x=" + fmt(p.x));
                break;
            }
        }
        if (!c.ok) break;
    }
    report("ba-identity-law", c.ok, c.detail);
}

// --------------------------------------------------------------- criterion 12

void minimizer_monotonicity() {
    Check c;
    BoundaryMap bd = BoundaryMap::affine(Mat2::identity(), Vec2{0, 0}, 8);
    GridMap base = GridMap::sample(Rect{0, 0, 1, 1}, 1.0 / 8,
                                   [](Vec2 p) { return p; }, "affine");
    EnergyDensitySpec v = density_by_name("elastic-pq", 2.0, 0.5);
    for (unsigned seed = 0; seed < 10; ++seed) {
        GridMap init = base;
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> U(-0.02, 0.02);
        for (std::size_t j = 1; j + 1 < init.ny(); ++j)
            for (std::size_t i = 1; i + 1 < init.nx(); ++i)
                init.set(i, j, init.value(i, j) + Vec2{U(rng), U(rng)});
        MinimizeResult res = minimize_penalized(v, 0.1, bd, init, {8, 1e-6});
        std::string tag = "seed " + std::to_string(seed);
        c.require(!res.J_trace.empty(), tag + " empty trace");
        for (std::size_t i = 1; i < res.J_trace.size(); ++i)
            if (res.J_trace[i] > res.J_trace[i - 1]) {
                c.require(false, tag + " J increased");
                break;
            }
        c.require(res.J_trace.back() < res.J_trace.front(), tag + " no strict decrease");
        DistortionReport rep = distortion(gradient_field(res.map));
        c.require(rep.degenerate_fraction == 0.0, tag + " nonpositive det cell");
    }
    report("minimizer-monotonicity", c.ok, c.detail);
}

// --------------------------------------------------------------- criterion 13

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void determinism(const std::string& cli) {
    Check c;
    if (cli.empty()) {
        report("determinism", false, "no CLI path given");
        return;
    }
    GridMap m = corpus::radial_grid(2, Rect{0.25, 0.25, 1, 1}, 1.0 / 32);
    io::save_text("acc_map.json", io::to_json(m).dump(2) + "\n");
    auto run = [&](const std::string& args) {
        std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    for (int pass = 1; pass <= 2; ++pass) {
        std::string s = std::to_string(pass);
        c.require(run("check --map acc_map.json --K 2.5 --out acc_check_" + s +
                      ".json --csv acc_check_" + s + ".csv --svg acc_check_" + s +
                      ".svg"),
                  "check run " + s + " failed");
        c.require(run("ym --density det --out acc_ym_" + s +
                      ".json --out-measure acc_meas_" + s + ".json"),
                  "ym run " + s + " failed");
    }
    for (const std::string& stem :
         {std::string("acc_check_X.json"), std::string("acc_check_X.csv"),
          std::string("acc_check_X.svg"), std::string("acc_ym_X.json"),
          std::string("acc_meas_X.json")}) {
        std::string a = stem, b = stem;
        a[a.find('X')] = '1';
        b[b.find('X')] = '2';
        std::string ca = slurp(a), cb = slurp(b);
        c.require(!ca.empty(), a + " empty");
        c.require(ca == cb, a + " differs between runs");
    }
    report("determinism", c.ok, c.detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    distortion_exactness();
    inverse_composition_laws();
    integrability_threshold();
    ciarlet_necas_criterion();
    fitting_1d();
    cutoff_criteria();
    young_measure_laws();
    jensen_lsc_direction();
    quasicircle_constants();
    ba_identity_law();
    minimizer_monotonicity();
    determinism(cli);
    if (failures) std::printf("%d criteria FAILED\n", failures);
    else std::printf("all 13 criteria passed\n");
    return failures ? 1 : 0;
}
