#include <benchmark/benchmark.h>

#include "salypath/dataset.hpp"
#include "salypath/fusion.hpp"
#include "salypath/heatmap.hpp"
#include "salypath/metrics.hpp"
#include "salypath/nn/model.hpp"
#include "salypath/rng.hpp"

using namespace salypath;

namespace {

SaliencyMap make_map(Rng& rng, int w, int h) {
    SaliencyMap m(w, h);
    for (double& v : m.values) v = rng.uniform();
    return m;
}

Scanpath make_path(Rng& rng, int n) {
    Scanpath sp;
    sp.user_id = "bench";
    for (int i = 0; i < n; ++i) {
        sp.fixations.push_back({{rng.uniform(), rng.uniform()}, std::nullopt});
    }
    return sp;
}

} // namespace

static void BM_OrthodromicDistance(benchmark::State& state) {
    Rng rng(1);
    const SphereCoord a = erp_to_sphere({rng.uniform(), rng.uniform()});
    const SphereCoord b = erp_to_sphere({rng.uniform(), rng.uniform()});
    for (auto _ : state) {
        benchmark::DoNotOptimize(orthodromic_distance(a, b));
    }
}
BENCHMARK(BM_OrthodromicDistance);

static void BM_ScanpathToMap(benchmark::State& state) {
    Rng rng(2);
    const Scanpath sp = make_path(rng, 100);
    const int w = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(scanpath_to_map(sp, w, w / 2));
    }
    state.SetItemsProcessed(state.iterations() * sp.size() * w * (w / 2));
}
BENCHMARK(BM_ScanpathToMap)->Arg(64)->Arg(128)->Arg(256);

static void BM_JointMerge(benchmark::State& state) {
    Rng rng(3);
    const int w = static_cast<int>(state.range(0));
    const SaliencyMap t = make_map(rng, w, w / 2);
    const SaliencyMap s = make_map(rng, w, w / 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(joint_merge(t, s, {0.7, 1.0}));
    }
    state.SetItemsProcessed(state.iterations() * t.size());
}
BENCHMARK(BM_JointMerge)->Arg(256)->Arg(1024);

static void BM_AucJudd(benchmark::State& state) {
    Rng rng(4);
    const int w = static_cast<int>(state.range(0));
    const SaliencyMap pred = make_map(rng, w, w / 2);
    SaliencyMap fix(w, w / 2);
    for (int i = 0; i < 100; ++i) fix.values[rng.uniform_index(fix.size())] = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(auc_judd(pred, fix));
    }
}
BENCHMARK(BM_AucJudd)->Arg(128)->Arg(512);

static void BM_AucBorji(benchmark::State& state) {
    Rng rng(5);
    const SaliencyMap pred = make_map(rng, 256, 128);
    SaliencyMap fix(256, 128);
    for (int i = 0; i < 100; ++i) fix.values[rng.uniform_index(fix.size())] = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(auc_borji(pred, fix, 100, 7));
    }
}
BENCHMARK(BM_AucBorji);

static void BM_Jarodzka(benchmark::State& state) {
    Rng rng(6);
    const int n = static_cast<int>(state.range(0));
    const Scanpath a = make_path(rng, n);
    const Scanpath b = make_path(rng, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(jarodzka(a, b));
    }
}
BENCHMARK(BM_Jarodzka)->Arg(100);

static void BM_ForwardPass(benchmark::State& state) {
    nn::ModelConfig cfg;
    cfg.width = 128;
    cfg.height = 64;
    cfg.widths = {4, 8, 12, 16};
    cfg.aux_width = 16;
    nn::SalyPathNet net(cfg, 1);
    const Scene scene = synthesize_scene(1, 128, 64, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward(scene.image));
    }
}
BENCHMARK(BM_ForwardPass);

BENCHMARK_MAIN();
