#include "vbbg/pipeline.hpp"

#include <cmath>
#include <exception>
#include <string>

#ifdef VBBG_HAVE_OPENMP
#include <omp.h>
#endif

#include "vbbg/error.hpp"

namespace vbbg {

namespace {

template <typename Fn>
void for_each_pixel(std::size_t n, Execution exec, Fn&& fn) {
#ifdef VBBG_HAVE_OPENMP
    if (exec == Execution::kParallel) {
        const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
        for (std::ptrdiff_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

void check_dims(const PipelineConfig& cfg, std::size_t width, std::size_t height, const char* who) {
    if (width != cfg.width || height != cfg.height) {
        throw InvalidInput(std::string(who) + ": frame is " + std::to_string(width) + "x" +
                           std::to_string(height) + ", bank expects " + std::to_string(cfg.width) + "x" +
                           std::to_string(cfg.height));
    }
}

void check_finite(const ThermalFrame& frame, const char* who) {
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (!std::isfinite(frame.values[i])) {
            throw InvalidInput(std::string(who) + ": non-finite value at pixel " + std::to_string(i));
        }
    }
}

}  // namespace

ModelBank::ModelBank(PipelineConfig config) : config_(std::move(config)) {
    if (config_.width == 0 || config_.height == 0) throw InvalidInput("ModelBank: zero frame dimension");
    if (config_.history_length < 2) throw InvalidInput("ModelBank: history length must be at least 2");
    if (config_.max_components < 1) throw InvalidInput("ModelBank: max_components must be at least 1");
    if (!(config_.nu > 0.0)) throw InvalidInput("ModelBank: nu must be positive");
    models_.reserve(config_.width * config_.height);
    for (std::size_t i = 0; i < config_.width * config_.height; ++i) {
        models_.emplace_back(config_.history_length, config_.nu);
    }
}

void ModelBank::adopt(std::vector<PixelModel> models) {
    if (models.size() != config_.width * config_.height) {
        throw InvalidInput("ModelBank::adopt: expected " + std::to_string(config_.width * config_.height) +
                           " models, got " + std::to_string(models.size()));
    }
    for (std::size_t i = 0; i < models.size(); ++i) {
        if (models[i].mixture.empty()) {
            throw InvalidInput("ModelBank::adopt: pixel " + std::to_string(i) + " has no components");
        }
        models[i].nu = config_.nu;
    }
    models_ = std::move(models);
    frames_seen_ = config_.history_length;
    trained_ = true;
}

std::uint64_t pixel_seed(std::uint64_t global_seed, std::size_t pixel_index) noexcept {
    // splitmix64 finalizer over the combined key
    std::uint64_t z = global_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(pixel_index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int parallel_threads() noexcept {
#ifdef VBBG_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void accumulate(ModelBank& bank, const ThermalFrame& frame) {
    if (bank.trained_) throw InvalidInput("accumulate: bank is already trained");
    check_dims(bank.config_, frame.width, frame.height, "accumulate");
    check_finite(frame, "accumulate");
    for (std::size_t i = 0; i < frame.size(); ++i) bank.models_[i].history.push_back(frame.values[i]);
    ++bank.frames_seen_;
}

void train(ModelBank& bank, Execution exec) {
    if (!bank.ready()) {
        throw InvalidInput("train: histories hold " + std::to_string(bank.frames_seen_) + " of " +
                           std::to_string(bank.config_.history_length) + " frames");
    }
    const auto& cfg = bank.config_;
    const std::size_t n = bank.models_.size();
    std::vector<std::exception_ptr> failures(n);

    for_each_pixel(n, exec, [&](std::size_t i) {
        try {
            auto& model = bank.models_[i];
            const auto samples = model.ordered_history();
            FitConfig fc = cfg.fit;
            fc.seed = pixel_seed(cfg.seed, i);
            model.mixture = fit(samples, std::min(cfg.max_components, samples.size()), fc).mixture;
        } catch (...) {
            failures[i] = std::current_exception();
        }
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i]) continue;
        const std::string where = "pixel (" + std::to_string(i % cfg.width) + ", " +
                                  std::to_string(i / cfg.width) + ")";
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
            throw NumericalError("train: " + where + ": " + e.what(), i);
        }
    }
    bank.trained_ = true;
}

Label classify(const PixelModel& model, double x, ClassifyMode mode, double density_threshold) {
    if (mode == ClassifyMode::kDensity) {
        return model.mixture.density(x) >= density_threshold ? Label::kBackground : Label::kForeground;
    }
    const auto closest = closest_component(model.mixture, x);
    return closest.distance <= model.nu ? Label::kBackground : Label::kForeground;
}

MaskFrame process_frame(ModelBank& bank, const ThermalFrame& frame, Execution exec) {
    if (!bank.trained()) throw InvalidInput("process_frame: bank is not trained");
    const auto& cfg = bank.config();
    check_dims(cfg, frame.width, frame.height, "process_frame");
    check_finite(frame, "process_frame");

    MaskFrame mask(frame.width, frame.height);
    auto& models = bank.models();
    for_each_pixel(models.size(), exec, [&](std::size_t i) {
        const double x = frame.values[i];
        mask.labels[i] = classify(models[i], x, cfg.mode, cfg.density_threshold);
        adapt(models[i], x, cfg.online);
    });
    return mask;
}

}  // namespace vbbg
