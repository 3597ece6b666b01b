#include <benchmark/benchmark.h>

#include "bicausal/verify.hpp"

using namespace bicausal;

namespace {

void BM_ConnectionTable(benchmark::State& state) {
    const auto prm = SpaceParams::make(-1, 0.5);
    const Vec3 p(0.3, -0.2, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(connection_table(prm, Signature::LORENTZIAN, p));
}
BENCHMARK(BM_ConnectionTable);

void BM_KoszulOracle(benchmark::State& state) {
    const auto prm = SpaceParams::make(-1, 0.5);
    const Vec3 p(0.3, -0.2, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(koszul_fd_oracle(prm, Signature::RIEMANNIAN, p, 0, 1));
}
BENCHMARK(BM_KoszulOracle);

void BM_EvaluatePoint(benchmark::State& state, const char* name, double k, double t) {
    const CatalogSurface cs = make_surface(name, SpaceParams::make(k, t));
    const auto& r = cs.immersion.domain;
    const Vec2 uv(0.5 * (r.u0 + r.u1), 0.5 * (r.v0 + r.v1));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_point(*cs.ambient, cs.immersion, uv));
}
BENCHMARK_CAPTURE(BM_EvaluatePoint, hopf_circle, "hopf:circle:r=0.8", 1.0, 1.0);
BENCHMARK_CAPTURE(BM_EvaluatePoint, tilted, "tilted", -1.0, 1.0);
BENCHMARK_CAPTURE(BM_EvaluatePoint, berger_helicoid, "berger-helicoid:alpha=0.5", 1.0, 1.0);
BENCHMARK_CAPTURE(BM_EvaluatePoint, su11_helicoid, "su11-helicoid:family=P1", -1.0, 1.0);

void BM_CurvatureSuite(benchmark::State& state) {
    const CatalogSurface cs = make_surface("graph", SpaceParams::make(4, 1));
    const auto d = evaluate_point(*cs.ambient, cs.immersion, Vec2(0.1, 0.1));
    for (auto _ : state) benchmark::DoNotOptimize(curvature_suite(*cs.ambient, cs.immersion, d, true));
}
BENCHMARK(BM_CurvatureSuite);

void BM_ExtendedMeanCurvature(benchmark::State& state) {
    const CatalogSurface cs = make_surface("su11-helicoid:family=H1", SpaceParams::make(-1, 1));
    const auto& g = dynamic_cast<const GroupAmbient&>(*cs.ambient);
    const auto& r = cs.immersion.domain;
    const Vec2 uv(0.5 * (r.u0 + r.u1), 0.5 * (r.v0 + r.v1));
    for (auto _ : state)
        benchmark::DoNotOptimize(extended_mean_curvature(g, cs.immersion, uv, Signature::RIEMANNIAN));
}
BENCHMARK(BM_ExtendedMeanCurvature);

void BM_DefaultSuite(benchmark::State& state) {
    SuiteConfig cfg;
    cfg.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_suite(cfg).pass);
}
BENCHMARK(BM_DefaultSuite)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
