#include <random>

#include <benchmark/benchmark.h>

#include "landrisk/class_table.hpp"
#include "landrisk/image_io.hpp"
#include "landrisk/metrics.hpp"
#include "landrisk/morphology.hpp"
#include "landrisk/slz.hpp"

using namespace landrisk;

namespace {

const ClassTable& table() {
    static const ClassTable t = ClassTable::from_file(std::string(LANDRISK_CONFIG_DIR) +
                                                      "/classes_sdd.json");
    return t;
}

LabelMap frame_1280x720(unsigned seed) {
    std::mt19937 rng(seed);
    LabelMap m(1280, 720);
    for (auto& v : m.data)
        v = ClassId(rng() % 24);
    return m;
}

}  // namespace

static void BM_MapClassToRisk(benchmark::State& state) {
    const LabelMap labels = frame_1280x720(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(map_class_to_risk(labels, table()));
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(labels.pixels()));
}
BENCHMARK(BM_MapClassToRisk)->Unit(benchmark::kMillisecond);

static void BM_DilateRadius5(benchmark::State& state) {
    const RiskMap risk = map_class_to_risk(frame_1280x720(2), table());
    DilationPolicy policy;
    policy.radius_per_level[3] = 5;
    policy.radius_per_level[4] = 5;
    policy.radius_per_level[5] = 5;
    for (auto _ : state)
        benchmark::DoNotOptimize(dilate_risk(risk, policy));
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(risk.pixels()));
}
BENCHMARK(BM_DilateRadius5)->Unit(benchmark::kMillisecond);

static void BM_FullFrame(benchmark::State& state) {
    const std::vector<std::uint8_t> record = encode_raw(frame_1280x720(3));
    DilationPolicy policy;
    policy.radius_per_level[3] = 5;
    policy.radius_per_level[4] = 5;
    policy.radius_per_level[5] = 5;
    for (auto _ : state) {
        const LabelMap labels = decode_raw_labels(record, table());
        const RiskMap risk = dilate_risk(map_class_to_risk(labels, table()), policy);
        benchmark::DoNotOptimize(encode_raw(risk));
    }
    state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_FullFrame)->Unit(benchmark::kMillisecond);

static void BM_ClearanceField(benchmark::State& state) {
    const int side = int(state.range(0));
    std::mt19937 rng(4);
    RiskMap risk(side, side);
    for (auto& v : risk.data)
        v = RiskLevel(rng() % 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(distance_to_risk(risk, RiskLevel(2)));
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(risk.pixels()));
}
BENCHMARK(BM_ClearanceField)->Arg(256)->Arg(720)->Unit(benchmark::kMillisecond);

static void BM_SelectSlz(benchmark::State& state) {
    std::mt19937 rng(5);
    RiskMap risk(640, 360);
    for (auto& v : risk.data)
        v = RiskLevel(rng() % 8 < 6 ? rng() % 3 : 3 + rng() % 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(select_slz(risk, RiskLevel(2), 5));
}
BENCHMARK(BM_SelectSlz)->Unit(benchmark::kMillisecond);

static void BM_Confusion(benchmark::State& state) {
    const LabelMap pred = frame_1280x720(6);
    const LabelMap gt = frame_1280x720(7);
    const int threads = int(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(ConfusionMatrix::from_maps(pred, gt, 24, threads));
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(pred.pixels()));
}
BENCHMARK(BM_Confusion)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
