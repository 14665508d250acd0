#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vbbg/online.hpp"

namespace vbbg::io {

/// model.bin: "VBGM", u16 version, u32 width, u32 height, then per pixel
/// u16 component count, (weight, mean, variance) as f64, u32 history length
/// and the history (oldest first) as f64. Little-endian throughout.
inline constexpr std::uint16_t kModelVersion = 1;

struct StoredModels {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<PixelModel> models;
};

std::vector<std::uint8_t> encode_models(std::size_t width, std::size_t height, std::span<const PixelModel> models);
StoredModels parse_models(std::span<const std::uint8_t> bytes);

void save_models(const std::filesystem::path& path, std::size_t width, std::size_t height,
                 std::span<const PixelModel> models);
StoredModels load_models(const std::filesystem::path& path);

}  // namespace vbbg::io
