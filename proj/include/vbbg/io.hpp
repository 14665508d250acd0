#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "vbbg/frame.hpp"

namespace vbbg::io {

// TRF: "TRF1", u32 LE width, u32 LE height, width*height f32 LE, row-major.

ThermalFrame parse_trf(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_trf(const ThermalFrame& frame);
ThermalFrame read_trf(const std::filesystem::path& path);
void write_trf(const std::filesystem::path& path, const ThermalFrame& frame);

// Binary PGM (P5). Samples are one byte when maxval < 256, else two bytes big-endian.

struct PgmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::uint32_t maxval = 255;
    std::vector<std::uint16_t> samples;
};

PgmImage parse_pgm(std::span<const std::uint8_t> bytes);
/// Canonical header "P5\n<w> <h>\n<maxval>\n".
std::vector<std::uint8_t> encode_pgm(const PgmImage& image);

/// Gray levels as reals, no rescaling.
ThermalFrame read_pgm_frame(const std::filesystem::path& path);
/// Zero is background, anything else foreground.
MaskFrame read_pgm_mask(const std::filesystem::path& path);
/// Writes integer-valued frames as PGM with the given maxval.
void write_pgm_frame(const std::filesystem::path& path, const ThermalFrame& frame, std::uint32_t maxval = 255);
/// 0 / 255 payload.
void write_mask(const std::filesystem::path& path, const MaskFrame& mask);

enum class ValueUnit { kKelvin, kGray8 };

/// Frame list with optional aligned ground-truth masks.
/// Line-oriented: `size W H`, `unit kelvin|gray8`, then `frame P [mask Q]` in temporal order.
/// Relative paths resolve against the manifest's directory.
struct SequenceManifest {
    std::size_t width = 0;
    std::size_t height = 0;
    ValueUnit unit = ValueUnit::kKelvin;
    std::vector<std::filesystem::path> frames;
    std::vector<std::optional<std::filesystem::path>> masks;  // aligned with frames

    /// Index of the first frame carrying a mask, if any.
    std::optional<std::size_t> first_mask_index() const;
};

SequenceManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
/// Also checks that every referenced file exists.
SequenceManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const SequenceManifest& manifest);

/// Reads frame `index` using the manifest's unit and checks its dimensions.
ThermalFrame load_frame(const SequenceManifest& manifest, std::size_t index);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace vbbg::io
