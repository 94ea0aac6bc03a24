// qcplane: command-line front end for the planar quasiconformal toolkit.
// Exit codes: 0 success (including checks that report "violated"),
// 2 malformed inputs, 3 mathematical precondition failures.

#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qcplane/beurling.hpp"
#include "qcplane/cutoff.hpp"
#include "qcplane/energy.hpp"
#include "qcplane/extension.hpp"
#include "qcplane/io.hpp"
#include "qcplane/planar_maps.hpp"
#include "qcplane/young.hpp"

namespace {

using nlohmann::json;
using namespace qcplane;

constexpr const char* kVersion = "0.1.0";

int thread_cap() {
    const char* env = std::getenv("QCPLANE_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

Mat2 parse_mat(const std::string& s) {
    std::istringstream in(s);
    double e[4];
    char comma;
    for (int i = 0; i < 4; ++i) {
        if (i > 0 && !(in >> comma)) throw io::SchemaError("matrix needs 4 numbers: " + s);
        if (!(in >> e[i])) throw io::SchemaError("matrix needs 4 numbers: " + s);
    }
    return {e[0], e[1], e[2], e[3]};
}

std::vector<std::size_t> parse_ks(const std::string& s) {
    std::vector<std::size_t> ks;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        long v = std::atol(tok.c_str());
        if (v < 1) throw io::SchemaError("bad k list: " + s);
        ks.push_back(std::size_t(v));
    }
    if (ks.empty()) throw io::SchemaError("empty k list");
    return ks;
}

json report_skeleton(const std::string& command, const json& config) {
    json r;
    r["tool"] = "qcplane";
    r["version"] = kVersion;
    r["command"] = command;
    r["config"] = config;
    r["config"]["threads"] = thread_cap();
    return r;
}

void emit(const json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        io::save_text(out_path, text);
}

struct LaminateArgs {
    std::string A = "1,0,0,1", B = "2,0,0,1", ks = "8,16,32,64";
    double lambda = 0.5;
    double domain_side = 1.0;
};

void add_laminate_flags(CLI::App* cmd, LaminateArgs& args) {
    cmd->add_option("--A", args.A, "gradient A, row-major a,b,c,d");
    cmd->add_option("--B", args.B, "gradient B, row-major a,b,c,d");
    cmd->add_option("--lambda", args.lambda, "volume fraction of A");
    cmd->add_option("--ks", args.ks, "comma list of oscillation counts");
    cmd->add_option("--side", args.domain_side, "side of the square domain");
}

json laminate_config(const LaminateArgs& a) {
    return {{"A", a.A}, {"B", a.B}, {"lambda", a.lambda}, {"ks", a.ks},
            {"side", a.domain_side}};
}

std::vector<GridMap> build_laminates(const LaminateArgs& a) {
    Rect dom{0.0, 0.0, a.domain_side, a.domain_side};
    return laminate_sequence(parse_mat(a.A), parse_mat(a.B), a.lambda, parse_ks(a.ks),
                             dom);
}

int cmd_check(const std::string& map_path, double K, const std::string& out,
              const std::string& csv, const std::string& svg) {
    GridMap m = io::grid_map_from_json(io::load_json(map_path));
    m.validate();
    DistortionReport rep = distortion(gradient_field(m));
    CiarletNecasReport cn = ciarlet_necas(m);

    json r = report_skeleton("check", {{"map", map_path}, {"K", K}});
    r["tolerances"] = {{"K_slack", 1e-9}, {"cn_tol", cn.tol}};
    r["results"]["distortion_sup"] = rep.sup;
    r["results"]["degenerate_fraction"] = rep.degenerate_fraction;
    r["results"]["within_K"] = rep.degenerate_fraction == 0.0 &&
                               rep.sup <= K * (1.0 + 1e-9);
    r["results"]["ciarlet_necas"] = {{"lhs", cn.lhs}, {"rhs", cn.rhs},
                                     {"satisfied", cn.satisfied}, {"tol", cn.tol}};
    if (!csv.empty()) io::save_text(csv, io::distortion_csv(rep));
    if (!svg.empty()) io::save_text(svg, io::svg_heatmap(m));
    emit(r, out);
    return 0;
}

int cmd_extend(const std::string& boundary_path, std::size_t resolution,
               const std::string& out, const std::string& out_map) {
    BoundaryMap b = io::boundary_map_from_json(io::load_json(boundary_path));
    ExtensionResult ext = extend_on_square(b, resolution);
    json r = report_skeleton("extend",
                             {{"boundary", boundary_path}, {"resolution", resolution}});
    r["tolerances"] = {{"affine_residual", 1e-9}, {"qs_M_cap", 1e6}};
    r["results"]["boundary_M"] = ext.boundary_M;
    r["results"]["distortion_sup"] = ext.distortion_sup;
    r["results"]["affine_fast_path"] = ext.affine_fast_path;
    if (!out_map.empty()) io::save_text(out_map, io::to_json(ext.map).dump(2) + "\n");
    emit(r, out);
    return 0;
}

int cmd_cutoff(const std::string& y_path, const std::string& yk_path, double eps,
               const std::string& out, const std::string& out_map,
               const std::string& svg) {
    GridMap y = io::grid_map_from_json(io::load_json(y_path));
    GridMap yk = io::grid_map_from_json(io::load_json(yk_path));
    CutoffResult cut = assemble_cutoff(y, yk, eps);
    const CutoffReport& c = cut.report;
    json r = report_skeleton("cutoff",
                             {{"y", y_path}, {"yk", yk_path}, {"eps", eps}});
    r["tolerances"] = {{"closeness_slack", 1e-9}, {"radius_tol", y.spacing() / 4.0}};
    r["results"] = {
        {"eps", c.eps},
        {"delta", c.delta},
        {"boundary_trace_exact", c.boundary_exact},
        {"sup_y_omega", c.sup_y_omega},
        {"sup_inverse_deviation", c.sup_inverse},
        {"closeness_bound", c.bound},
        {"within_bound", c.sup_y_omega <= c.bound},
        {"modified_measure", c.modified_measure},
        {"distortion_sup", c.distortion_sup},
        {"multiplicity_one", c.multiplicity_one},
        {"ciarlet_necas_ok", c.ciarlet_necas_ok},
        {"bridges", c.bridges},
        {"mid_squares", c.mid_squares},
        {"gamma", cut.partition.gamma},
    };
    if (!out_map.empty()) io::save_text(out_map, io::to_json(cut.omega).dump(2) + "\n");
    if (!svg.empty()) io::save_text(svg, io::svg_cutoff_overlay(cut, y));
    emit(r, out);
    return 0;
}

int cmd_ym(const LaminateArgs& la, double K, const std::string& density, double p,
           double q, const std::string& out, const std::string& out_measure) {
    std::vector<GridMap> seq = build_laminates(la);
    EmpiricalYoungMeasure m = empirical_measure(seq);
    SupportReport sup = support_check(m, K);
    MomentReport mom = moment_field(m, seq.back());
    EnergyDensitySpec v = density_by_name(density, p, q);
    JensenReport jen = jensen_check(m, v, seq.back());

    json cfg = laminate_config(la);
    cfg["K"] = K;
    cfg["density"] = density;
    json r = report_skeleton("ym", cfg);
    r["tolerances"] = {{"atom_cluster", 1e-6}, {"weight_sum", 1e-9},
                       {"jensen_tol", jen.tol}};
    r["results"]["support_fraction"] = sup.fraction_inside;
    r["results"]["worst_excess"] = sup.worst_excess;
    r["results"]["moment_sup_deviation"] = mom.sup_deviation;
    r["results"]["jensen"] = {{"cells", jen.cells_checked},
                              {"violations", jen.violations},
                              {"equality_throughout", jen.equality_throughout},
                              {"verdict", jen.violations == 0 ? "satisfied" : "violated"}};
    if (!out_measure.empty()) io::save_text(out_measure, io::to_json(m).dump(2) + "\n");
    emit(r, out);
    return 0;
}

int cmd_lsc(const LaminateArgs& la, const std::string& density, double p, double q,
            const std::string& out) {
    std::vector<GridMap> seq = build_laminates(la);
    Mat2 A = parse_mat(la.A), B = parse_mat(la.B);
    Mat2 M = A * la.lambda + B * (1.0 - la.lambda);
    Rect dom{0.0, 0.0, la.domain_side, la.domain_side};
    GridMap limit = GridMap::sample(dom, seq.back().spacing(),
                                    [&](Vec2 x) { return M * x; }, "affine");
    EnergyDensitySpec v = density_by_name(density, p, q, M);
    LscReport rep = lsc_experiment(v, seq, limit);

    json cfg = laminate_config(la);
    cfg["density"] = density;
    json r = report_skeleton("lsc", cfg);
    r["tolerances"] = {{"lsc_tol", rep.tol}};
    r["results"]["J_seq"] = rep.J_seq;
    r["results"]["liminf_seq"] = rep.liminf_seq;
    r["results"]["J_limit"] = rep.J_limit;
    r["results"]["verdict"] = rep.satisfied ? "satisfied" : "violated";
    emit(r, out);
    return 0;
}

int cmd_minimize(const std::string& density, double p, double q, double eps_pen,
                 const std::string& init_path, const std::string& boundary_path,
                 std::size_t n, double perturb, unsigned seed, std::size_t max_sweeps,
                 const std::string& out, const std::string& out_map,
                 const std::string& csv) {
    GridMap init;
    BoundaryMap boundary;
    if (!init_path.empty()) {
        init = io::grid_map_from_json(io::load_json(init_path));
    } else {
        Rect dom{0.0, 0.0, 1.0, 1.0};
        init = GridMap::sample(dom, 1.0 / double(n), [](Vec2 x) { return x; });
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> u(-perturb, perturb);
        double h = init.spacing();
        for (std::size_t j = 1; j + 1 < init.ny(); ++j)
            for (std::size_t i = 1; i + 1 < init.nx(); ++i)
                init.set(i, j, init.value(i, j) + Vec2{u(rng) * h, u(rng) * h});
    }
    if (!boundary_path.empty())
        boundary = io::boundary_map_from_json(io::load_json(boundary_path));
    else
        boundary = BoundaryMap::affine(Mat2::identity(), {0, 0}, 64);

    EnergyDensitySpec v = density_by_name(density, p, q);
    MinimizeOptions opts;
    opts.max_sweeps = max_sweeps;
    MinimizeResult res = minimize_penalized(v, eps_pen, boundary, init, opts);

    json r = report_skeleton(
        "minimize", {{"density", density}, {"p", p}, {"q", q}, {"eps_pen", eps_pen},
                     {"init", init_path}, {"boundary", boundary_path}, {"n", n},
                     {"perturb", perturb}, {"seed", seed}, {"max_sweeps", max_sweeps}});
    r["tolerances"] = {{"det_floor", opts.det_floor}};
    r["results"]["J_initial"] = penalized_energy(init, v, eps_pen);
    r["results"]["J_trace"] = res.J_trace;
    r["results"]["accepted_moves"] = res.accepted_moves;
    if (!out_map.empty()) io::save_text(out_map, io::to_json(res.map).dump(2) + "\n");
    if (!csv.empty()) io::save_text(csv, io::trace_csv("J", res.J_trace));
    emit(r, out);
    return 0;
}

int cmd_profile(const LaminateArgs& la, double p, double q, const std::string& out,
                const std::string& csv) {
    std::vector<GridMap> seq = build_laminates(la);
    EquiintegrabilityProfile prof = equiintegrability_profile(seq, p, q);
    json cfg = laminate_config(la);
    cfg["p"] = p;
    cfg["q"] = q;
    json r = report_skeleton("profile", cfg);
    r["tolerances"] = json::object();
    r["results"]["thresholds"] = prof.thresholds;
    r["results"]["sup_tails"] = prof.sup_tails;
    emit(r, out);
    if (!csv.empty()) {
        std::string text = "threshold,sup_tail\r\n";
        for (std::size_t i = 0; i < prof.thresholds.size(); ++i)
            text += io::num(prof.thresholds[i]) + "," + io::num(prof.sup_tails[i]) +
                    "\r\n";
        io::save_text(csv, text);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar quasiconformal maps, Young measures, and cut-off gluing"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string map_path, out, csv, svg, out_map, out_measure;
    std::string y_path, yk_path, boundary_path, init_path;
    std::string density = "dirichlet";
    double K = 2.0, eps = 0.125, p = 2.0, q = 0.5, eps_pen = 0.05, perturb = 0.1;
    std::size_t resolution = 64, n = 16, max_sweeps = 32;
    unsigned seed = 0;
    LaminateArgs la;

    auto* check = app.add_subcommand("check", "distortion and injectivity report");
    check->add_option("--map", map_path, "GridMap JSON")->required();
    check->add_option("--K", K, "distortion bound to check against");
    check->add_option("--out", out, "report JSON path (stdout when omitted)");
    check->add_option("--csv", csv, "per-cell distortion CSV path");
    check->add_option("--svg", svg, "distortion heatmap SVG path");

    auto* extend = app.add_subcommand("extend", "quasiconformal extension on the square");
    extend->add_option("--boundary", boundary_path, "BoundaryMap JSON")->required();
    extend->add_option("--resolution", resolution, "cells per side");
    extend->add_option("--out", out, "report JSON path");
    extend->add_option("--out-map", out_map, "extended GridMap JSON path");

    auto* cutoff = app.add_subcommand("cutoff", "boundary cut-off gluing of two maps");
    cutoff->add_option("--y", y_path, "outer map GridMap JSON")->required();
    cutoff->add_option("--yk", yk_path, "inner map GridMap JSON")->required();
    cutoff->add_option("--eps", eps, "shell pitch");
    cutoff->add_option("--out", out, "report JSON path");
    cutoff->add_option("--out-map", out_map, "glued GridMap JSON path");
    cutoff->add_option("--svg", svg, "partition/bridge overlay SVG path");

    auto* ym = app.add_subcommand("ym", "laminate Young-measure experiments");
    add_laminate_flags(ym, la);
    ym->add_option("--K", K, "cone parameter for the support check");
    ym->add_option("--density", density, "density for the Jensen check");
    ym->add_option("--p", p, "growth exponent for elastic-pq");
    ym->add_option("--q", q, "determinant exponent for elastic-pq");
    ym->add_option("--out", out, "report JSON path");
    ym->add_option("--out-measure", out_measure, "EmpiricalYoungMeasure JSON path");

    auto* lsc = app.add_subcommand("lsc", "lower-semicontinuity experiment");
    add_laminate_flags(lsc, la);
    lsc->add_option("--density", density, "density under test");
    lsc->add_option("--p", p, "growth exponent for elastic-pq");
    lsc->add_option("--q", q, "determinant exponent for elastic-pq");
    lsc->add_option("--out", out, "report JSON path");

    auto* minimize = app.add_subcommand("minimize", "penalized energy minimization");
    minimize->add_option("--density", density, "density name");
    minimize->add_option("--p", p, "growth exponent for elastic-pq");
    minimize->add_option("--q", q, "determinant exponent for elastic-pq");
    minimize->add_option("--eps-pen", eps_pen, "distortion penalty weight");
    minimize->add_option("--init", init_path, "initial GridMap JSON");
    minimize->add_option("--boundary", boundary_path, "BoundaryMap JSON");
    minimize->add_option("--n", n, "cells per side of the default start");
    minimize->add_option("--perturb", perturb, "perturbation amplitude in spacings");
    minimize->add_option("--seed", seed, "perturbation seed");
    minimize->add_option("--max-sweeps", max_sweeps, "sweep budget");
    minimize->add_option("--out", out, "report JSON path");
    minimize->add_option("--out-map", out_map, "minimizer GridMap JSON path");
    minimize->add_option("--csv", csv, "J trace CSV path");

    auto* profile = app.add_subcommand("profile", "equiintegrability tail profile");
    add_laminate_flags(profile, la);
    profile->add_option("--p", p, "gradient exponent");
    profile->add_option("--q", q, "determinant exponent");
    profile->add_option("--out", out, "report JSON path");
    profile->add_option("--csv", csv, "threshold/tail CSV path");

    try {
        app.parse(argc, argv);
        if (check->parsed()) return cmd_check(map_path, K, out, csv, svg);
        if (extend->parsed()) return cmd_extend(boundary_path, resolution, out, out_map);
        if (cutoff->parsed()) return cmd_cutoff(y_path, yk_path, eps, out, out_map, svg);
        if (ym->parsed()) return cmd_ym(la, K, density, p, q, out, out_measure);
        if (lsc->parsed()) return cmd_lsc(la, density, p, q, out);
        if (minimize->parsed())
            return cmd_minimize(density, p, q, eps_pen, init_path, boundary_path, n,
                                perturb, seed, max_sweeps, out, out_map, csv);
        if (profile->parsed()) return cmd_profile(la, p, q, out, csv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const qcplane::io::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const qcplane::Error& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
