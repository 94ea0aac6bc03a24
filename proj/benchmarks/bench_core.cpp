#include <benchmark/benchmark.h>

#include <cmath>

#include "qcplane/beurling.hpp"
#include "qcplane/cutoff.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/grid_map.hpp"
#include "qcplane/planar_maps.hpp"
#include "qcplane/young.hpp"

using namespace qcplane;

namespace {

GridMap radial_map(double K, std::size_t n) {
    return GridMap::sample(Rect{0.25, 0.25, 1, 1}, 1.0 / double(n),
                           [K](Vec2 p) {
                               double r = p.norm();
                               return p * std::pow(r, 1.0 / K - 1.0);
                           },
                           "radial");
}

void BM_gradient_distortion(benchmark::State& state) {
    GridMap m = radial_map(3.0, std::size_t(state.range(0)));
    for (auto _ : state) {
        DistortionReport rep = distortion(gradient_field(m));
        benchmark::DoNotOptimize(rep.sup);
    }
}
BENCHMARK(BM_gradient_distortion)->Arg(64)->Arg(256);

void BM_invert(benchmark::State& state) {
    GridMap m = radial_map(2.0, std::size_t(state.range(0)));
    for (auto _ : state) {
        GridMap inv = invert(m);
        benchmark::DoNotOptimize(inv.nx());
    }
}
BENCHMARK(BM_invert)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ciarlet_necas(benchmark::State& state) {
    GridMap m = radial_map(2.0, std::size_t(state.range(0)));
    for (auto _ : state) {
        CiarletNecasReport cn = ciarlet_necas(m);
        benchmark::DoNotOptimize(cn.lhs);
    }
}
BENCHMARK(BM_ciarlet_necas)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_laminate_measure(benchmark::State& state) {
    std::size_t k = std::size_t(state.range(0));
    for (auto _ : state) {
        GridMap m = laminate_map(Mat2::identity(), Mat2::diag(2, 1), 0.5, k,
                                 Rect{0, 0, 1, 1});
        EmpiricalYoungMeasure em = empirical_measure({m});
        benchmark::DoNotOptimize(em.cells_x());
    }
}
BENCHMARK(BM_laminate_measure)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_beurling_ahlfors(benchmark::State& state) {
    Homeo1D s({0.0, 0.25, 0.5, 1.0}, {0.0, 0.4, 0.55, 1.0});
    for (auto _ : state) {
        GridMap f = beurling_ahlfors(s, std::size_t(state.range(0)));
        benchmark::DoNotOptimize(f.nx());
    }
}
BENCHMARK(BM_beurling_ahlfors)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_assemble_cutoff(benchmark::State& state) {
    double h = 1.0 / 32;
    auto y = [](Vec2 v) {
        return Vec2{v.x + 0.02 * std::sin(v.x + 0.3) * std::cos(1.1 * v.y),
                    v.y + 0.02 * std::cos(1.1 * v.x) * std::sin(v.y + 0.3)};
    };
    GridMap ym = GridMap::sample(Rect{0, 0, 4, 4}, h, y, "");
    for (auto _ : state) {
        CutoffResult cut = assemble_cutoff(ym, ym, 0.125);
        benchmark::DoNotOptimize(cut.report.bridges);
    }
}
BENCHMARK(BM_assemble_cutoff)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
