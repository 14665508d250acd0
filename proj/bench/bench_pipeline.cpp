// Serial reference vs OpenMP execution of the per-pixel kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "vbbg/pipeline.hpp"
#include "vbbg/synth.hpp"

namespace {

vbbg::SynthSpec bench_spec(std::size_t side) {
    vbbg::SynthSpec s;
    s.width = side;
    s.height = side;
    s.frames = 120;
    s.train_frames = 100;
    s.blob_width = side / 4;
    s.blob_height = side / 4;
    s.blob_x = 1;
    s.blob_y = 1;
    s.blob_vx = 1;
    s.blob_vy = 1;
    s.blob_first_frame = 100;
    return s;
}

const vbbg::SynthSequence& sequence(std::size_t side) {
    static std::size_t cached_side = 0;
    static vbbg::SynthSequence cached;
    if (cached_side != side) {
        cached = vbbg::synth_sequence(bench_spec(side), 42);
        cached_side = side;
    }
    return cached;
}

vbbg::ModelBank filled_bank(std::size_t side) {
    vbbg::PipelineConfig cfg;
    cfg.width = side;
    cfg.height = side;
    cfg.history_length = 100;
    cfg.seed = 42;
    vbbg::ModelBank bank(cfg);
    const auto& seq = sequence(side);
    for (std::size_t f = 0; f < 100; ++f) vbbg::accumulate(bank, seq.frames[f]);
    return bank;
}

void train(benchmark::State& state, vbbg::Execution exec) {
    const auto side = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        state.PauseTiming();
        auto bank = filled_bank(side);
        state.ResumeTiming();
        vbbg::train(bank, exec);
        benchmark::DoNotOptimize(bank.models().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
    state.counters["threads"] = exec == vbbg::Execution::kParallel ? vbbg::parallel_threads() : 1;
}

void process(benchmark::State& state, vbbg::Execution exec) {
    const auto side = static_cast<std::size_t>(state.range(0));
    auto trained = filled_bank(side);
    vbbg::train(trained, exec);
    const auto& seq = sequence(side);
    for (auto _ : state) {
        state.PauseTiming();
        auto bank = trained;
        state.ResumeTiming();
        for (std::size_t f = 100; f < seq.frames.size(); ++f) {
            benchmark::DoNotOptimize(vbbg::process_frame(bank, seq.frames[f], exec));
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side * 20));
    state.counters["threads"] = exec == vbbg::Execution::kParallel ? vbbg::parallel_threads() : 1;
}

void BM_TrainSerial(benchmark::State& s) { train(s, vbbg::Execution::kSerial); }
void BM_TrainParallel(benchmark::State& s) { train(s, vbbg::Execution::kParallel); }
void BM_ProcessSerial(benchmark::State& s) { process(s, vbbg::Execution::kSerial); }
void BM_ProcessParallel(benchmark::State& s) { process(s, vbbg::Execution::kParallel); }

}  // namespace

BENCHMARK(BM_TrainSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProcessSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProcessParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
