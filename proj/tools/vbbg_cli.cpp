// vbbg: train/run per-pixel background models, evaluate masks, generate data.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vbbg/error.hpp"
#include "vbbg/io.hpp"
#include "vbbg/metrics.hpp"
#include "vbbg/model_io.hpp"
#include "vbbg/pipeline.hpp"
#include "vbbg/synth.hpp"
#include "vbbg/toy.hpp"

namespace fs = std::filesystem;

namespace {

std::string mask_name(std::size_t frame_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "mask_%04zu.pgm", frame_index);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    vbbg::io::write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

vbbg::Execution execution(bool serial) { return serial ? vbbg::Execution::kSerial : vbbg::Execution::kParallel; }

struct TrainArgs {
    fs::path manifest, out;
    std::size_t history_n = 100;
    std::size_t kmax = 10;
    std::uint64_t seed = 0;
    bool serial = false;
};

int cmd_train(const TrainArgs& a) {
    const auto manifest = vbbg::io::read_manifest(a.manifest);
    if (manifest.frames.size() < a.history_n) {
        throw vbbg::InvalidInput("train: manifest has " + std::to_string(manifest.frames.size()) +
                                 " frames, history needs " + std::to_string(a.history_n));
    }
    vbbg::PipelineConfig cfg;
    cfg.width = manifest.width;
    cfg.height = manifest.height;
    cfg.history_length = a.history_n;
    cfg.max_components = a.kmax;
    cfg.seed = a.seed;
    vbbg::ModelBank bank(cfg);
    for (std::size_t i = 0; i < a.history_n; ++i) vbbg::accumulate(bank, vbbg::io::load_frame(manifest, i));
    vbbg::train(bank, execution(a.serial));
    vbbg::io::save_models(a.out, cfg.width, cfg.height, bank.models());
    return 0;
}

struct RunArgs {
    fs::path manifest, model, mask_dir;
    double nu = 2.5;
    long long start = -1;
    bool density = false;
    double density_threshold = 0.0;
    bool serial = false;
};

int cmd_run(const RunArgs& a) {
    const auto manifest = vbbg::io::read_manifest(a.manifest);
    auto stored = vbbg::io::load_models(a.model);
    if (stored.width != manifest.width || stored.height != manifest.height) {
        throw vbbg::InvalidInput("run: model is " + std::to_string(stored.width) + "x" +
                                 std::to_string(stored.height) + ", manifest is " + std::to_string(manifest.width) +
                                 "x" + std::to_string(manifest.height));
    }
    const std::size_t history = stored.models.empty() ? 0 : stored.models.front().capacity();
    // Frames used for training are skipped unless told otherwise.
    const std::size_t start = a.start >= 0 ? static_cast<std::size_t>(a.start) : history;

    vbbg::PipelineConfig cfg;
    cfg.width = stored.width;
    cfg.height = stored.height;
    cfg.history_length = history;
    cfg.nu = a.nu;
    cfg.mode = a.density ? vbbg::ClassifyMode::kDensity : vbbg::ClassifyMode::kBand;
    cfg.density_threshold = a.density_threshold;
    for (auto& m : stored.models) m.nu = a.nu;
    vbbg::ModelBank bank(cfg);
    bank.adopt(std::move(stored.models));

    fs::create_directories(a.mask_dir);
    for (std::size_t i = start; i < manifest.frames.size(); ++i) {
        const auto mask = vbbg::process_frame(bank, vbbg::io::load_frame(manifest, i), execution(a.serial));
        vbbg::io::write_mask(a.mask_dir / mask_name(i), mask);
    }
    return 0;
}

struct EvalArgs {
    fs::path pred_dir, manifest, report;
};

int cmd_eval(const EvalArgs& a) {
    const auto manifest = vbbg::io::read_manifest(a.manifest);
    std::vector<vbbg::MaskFrame> predicted, truth;
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
        if (!manifest.masks[i]) continue;
        const auto pred_path = a.pred_dir / mask_name(i);
        if (!fs::exists(pred_path)) throw vbbg::IoError("eval: missing prediction " + pred_path.string());
        predicted.push_back(vbbg::io::read_pgm_mask(pred_path));
        truth.push_back(vbbg::io::read_pgm_mask(*manifest.masks[i]));
        indices.push_back(i);
    }
    if (indices.empty()) throw vbbg::InvalidInput("eval: manifest has no ground-truth masks");
    const auto report = vbbg::evaluate(predicted, truth, indices);
    std::ostringstream csv;
    vbbg::write_report_csv(csv, report);
    write_text(a.report, csv.str());
    const auto& g = report.aggregate;
    std::printf("frames %zu  precision %.4f  recall %.4f  f1 %.4f  (best frame %zu, worst frame %zu)\n",
                indices.size(), g.precision, g.recall, g.f1, report.frame_indices[report.best_frame],
                report.frame_indices[report.worst_frame]);
    return 0;
}

int cmd_toy(std::uint64_t seed, const fs::path& out) {
    const auto report = vbbg::toy_experiment(seed);
    std::ostringstream csv;
    vbbg::write_toy_csv(csv, report);
    write_text(out, csv.str());
    for (const auto& stage : report.stages) {
        std::printf("after %zu new samples: %zu components\n", stage.new_samples, stage.mixture.size());
    }
    return 0;
}

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir, std::uint64_t seed) {
    const auto spec = vbbg::read_synth_spec(spec_path);
    const auto seq = vbbg::synth_sequence(spec, seed);
    vbbg::write_synth_sequence(out_dir, spec, seq);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational Bayesian per-pixel background subtraction for thermal video"};
    app.require_subcommand(1);

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Fit per-pixel mixtures on the first history-n frames");
    train_cmd->add_option("--manifest", train.manifest, "Sequence manifest")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--out", train.out, "Output model file")->required();
    train_cmd->add_option("--history-n", train.history_n, "Training history length")->capture_default_str();
    train_cmd->add_option("--kmax", train.kmax, "Maximum components per pixel")->capture_default_str();
    train_cmd->add_option("--seed", train.seed, "Seed")->capture_default_str();
    train_cmd->add_flag("--serial", train.serial, "Disable OpenMP parallelism");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Classify and adapt over the remaining frames, writing masks");
    run_cmd->add_option("--manifest", run.manifest, "Sequence manifest")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--model", run.model, "Model file from `train`")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--mask-dir", run.mask_dir, "Output directory for mask_NNNN.pgm")->required();
    run_cmd->add_option("--nu", run.nu, "Band width in standard deviations")->capture_default_str();
    run_cmd->add_option("--start", run.start, "First frame to process (default: model history length)");
    run_cmd->add_option("--density-threshold", run.density_threshold,
                        "Classify by full mixture density against this threshold instead of the band")
        ->each([&](const std::string&) { run.density = true; });
    run_cmd->add_flag("--serial", run.serial, "Disable OpenMP parallelism");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Pixel-wise precision/recall/F1 against manifest masks");
    eval_cmd->add_option("--pred-dir", eval.pred_dir, "Directory with predicted masks")->required();
    eval_cmd->add_option("--manifest", eval.manifest, "Sequence manifest")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--report", eval.report, "Output CSV")->required();

    std::uint64_t toy_seed = 0;
    fs::path toy_report;
    auto* toy_cmd = app.add_subcommand("toy", "Two-Gaussian fit followed by streaming a novel mode");
    toy_cmd->add_option("--seed", toy_seed, "Seed")->capture_default_str();
    toy_cmd->add_option("--report", toy_report, "Output CSV")->required();

    fs::path synth_spec, synth_out;
    std::uint64_t synth_seed = 0;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic thermal sequence with ground truth");
    synth_cmd->add_option("--spec", synth_spec, "Spec file")->required()->check(CLI::ExistingFile);
    synth_cmd->add_option("--out-dir", synth_out, "Output directory")->required();
    synth_cmd->add_option("--seed", synth_seed, "Seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) return cmd_train(train);
        if (*run_cmd) return cmd_run(run);
        if (*eval_cmd) return cmd_eval(eval);
        if (*toy_cmd) return cmd_toy(toy_seed, toy_report);
        if (*synth_cmd) return cmd_synth(synth_spec, synth_out, synth_seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "vbbg: %s\n", e.what());
        return 1;
    }
    return 0;
}
