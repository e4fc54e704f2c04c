#include <cmath>

#include <benchmark/benchmark.h>

#include "rotbl/analytic_norms.hpp"
#include "rotbl/boundary_layer.hpp"
#include "rotbl/operators.hpp"
#include "rotbl/pipeline.hpp"

using namespace rotbl;

namespace {

Field2D layer_data(const GridPtr& g) {
    Field2D u(g, "u");
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) {
            const double x = g->x1_nodes[i], y = g->y_nodes[j];
            u(i, j) = 0.1 * std::exp(-x * x / 4.0) * std::cos(x) * y * y * std::exp(-y * y);
        }
    return u;
}

void bm_d_x1(benchmark::State& st) {
    const auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 10.0, 8.0);
    const Field2D u = layer_data(g);
    for (auto _ : st) benchmark::DoNotOptimize(d_x1(u, 1));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g->size()));
}
BENCHMARK(bm_d_x1)->Args({64, 64})->Args({128, 128})->Args({256, 256});

void bm_step_bl(benchmark::State& st) {
    RunConfig c;
    c.n_x1 = static_cast<int>(st.range(0));
    c.n_y = static_cast<int>(st.range(1));
    c.scenario.id = "small_data";
    const InitialData d = make_scenario(c);
    const TraceSet tr = extract_traces(d.outer);
    const RegularizationParams reg{c.eps1, c.schedule};
    for (auto _ : st) benchmark::DoNotOptimize(step_bl(d.bl.u, tr, reg, 1e-3));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(d.layer_grid->size()));
}
BENCHMARK(bm_step_bl)->Args({64, 64})->Args({64, 128})->Args({128, 256});

void bm_x_norm(benchmark::State& st) {
    const auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 10.0, 8.0);
    const Field2D u = layer_data(g);
    const NormParams p{0.5, 0.5, 1.0, static_cast<int>(st.range(2))};
    for (auto _ : st) benchmark::DoNotOptimize(x_norm(u, p));
}
BENCHMARK(bm_x_norm)->Args({64, 128, 8})->Args({128, 256, 8})->Args({128, 256, 12});

}  // namespace

BENCHMARK_MAIN();
