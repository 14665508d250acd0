#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vbbg/frame.hpp"
#include "vbbg/online.hpp"
#include "vbbg/vb_fit.hpp"

namespace vbbg {

/// Serial execution is the reference; parallel runs the same per-pixel kernel
/// under OpenMP and must produce identical results.
enum class Execution { kSerial, kParallel };

enum class ClassifyMode {
    kBand,     // background iff closest-component Mahalanobis distance <= nu
    kDensity,  // background iff mixture density >= density_threshold
};

struct PipelineConfig {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t history_length = 100;
    std::size_t max_components = 10;
    double nu = 2.5;
    ClassifyMode mode = ClassifyMode::kBand;
    double density_threshold = 0.0;
    std::uint64_t seed = 0;
    FitConfig fit;
    OnlineConfig online;
};

/// Per-pixel models for one camera.
class ModelBank {
public:
    explicit ModelBank(PipelineConfig config);

    const PipelineConfig& config() const noexcept { return config_; }
    std::size_t pixel_count() const noexcept { return models_.size(); }
    std::size_t frames_seen() const noexcept { return frames_seen_; }
    bool ready() const noexcept { return frames_seen_ >= config_.history_length; }
    bool trained() const noexcept { return trained_; }

    std::vector<PixelModel>& models() noexcept { return models_; }
    const std::vector<PixelModel>& models() const noexcept { return models_; }
    const PixelModel& model(std::size_t x, std::size_t y) const { return models_[y * config_.width + x]; }

    /// Adopts already-trained models (deserialization). Sizes must match.
    void adopt(std::vector<PixelModel> models);

private:
    friend void accumulate(ModelBank&, const ThermalFrame&);
    friend void train(ModelBank&, Execution);

    PipelineConfig config_;
    std::vector<PixelModel> models_;
    std::size_t frames_seen_ = 0;
    bool trained_ = false;
};

/// Appends every pixel value of `frame` to its history.
/// Throws InvalidInput on dimension mismatch or when the bank is trained.
void accumulate(ModelBank& bank, const ThermalFrame& frame);

/// Fits every pixel history. Per-pixel seeds derive from the config seed and
/// the pixel index, so results do not depend on execution order.
/// Throws InvalidInput when histories are incomplete; per-pixel numerical
/// failures are rethrown as NumericalError carrying the pixel index.
void train(ModelBank& bank, Execution exec = Execution::kParallel);

/// Pure labelling of one value against one model.
Label classify(const PixelModel& model, double x, ClassifyMode mode = ClassifyMode::kBand,
               double density_threshold = 0.0);

/// Classifies every pixel with the pre-update model, then adapts it.
MaskFrame process_frame(ModelBank& bank, const ThermalFrame& frame, Execution exec = Execution::kParallel);

/// Seed for one pixel's k-means initialization.
std::uint64_t pixel_seed(std::uint64_t global_seed, std::size_t pixel_index) noexcept;

/// Threads OpenMP will use for kParallel (1 without OpenMP).
int parallel_threads() noexcept;

}  // namespace vbbg
