#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "vbbg/frame.hpp"

namespace vbbg {

/// Static background with Gaussian sensor noise, optional sinusoidal drift,
/// and one rectangular hot blob moving at constant velocity.
struct SynthSpec {
    std::size_t width = 320;
    std::size_t height = 240;
    std::size_t frames = 200;
    std::size_t train_frames = 100;  // ground truth is emitted from this frame on
    double background = 295.0;       // Kelvin
    double noise = 0.3;              // per-pixel, per-frame standard deviation
    double drift_amplitude = 0.0;
    double drift_period = 100.0;  // frames
    std::size_t blob_width = 80;
    std::size_t blob_height = 48;
    double blob_delta = 5.0;
    double blob_x = 0.0;  // top-left corner at blob_first_frame
    double blob_y = 0.0;
    double blob_vx = 0.0;  // pixels per frame
    double blob_vy = 0.0;
    std::size_t blob_first_frame = 100;

    /// Throws InvalidInput if the blob leaves the frame or fields are inconsistent.
    void validate() const;
};

/// `key value...` lines; unknown keys and malformed values throw ParseError.
SynthSpec parse_synth_spec(std::string_view text);
SynthSpec read_synth_spec(const std::filesystem::path& path);

struct SynthSequence {
    std::vector<ThermalFrame> frames;
    std::vector<MaskFrame> truth;  // one per frame
};

/// Deterministic for a given spec and seed. Values are rounded to float32 so
/// a TRF round-trip reproduces them exactly.
SynthSequence synth_sequence(const SynthSpec& spec, std::uint64_t seed);

/// Writes frame_NNNN.trf, mask_NNNN.pgm (from train_frames on) and manifest.txt.
void write_synth_sequence(const std::filesystem::path& dir, const SynthSpec& spec, const SynthSequence& seq);

}  // namespace vbbg
