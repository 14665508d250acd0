#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vbbg {

/// Row-major raster of temperatures (Kelvin) or raw gray levels.
struct ThermalFrame {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    ThermalFrame() = default;
    ThermalFrame(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), values(w * h, fill) {}

    std::size_t size() const noexcept { return values.size(); }
    double& at(std::size_t x, std::size_t y) { return values[y * width + x]; }
    double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
};

enum class Label : std::uint8_t { kBackground = 0, kForeground = 1 };

struct MaskFrame {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Label> labels;

    MaskFrame() = default;
    MaskFrame(std::size_t w, std::size_t h, Label fill = Label::kBackground)
        : width(w), height(h), labels(w * h, fill) {}

    std::size_t size() const noexcept { return labels.size(); }
    Label& at(std::size_t x, std::size_t y) { return labels[y * width + x]; }
    Label at(std::size_t x, std::size_t y) const { return labels[y * width + x]; }
    std::size_t foreground_count() const noexcept;

    friend bool operator==(const MaskFrame&, const MaskFrame&) = default;
};

inline std::size_t MaskFrame::foreground_count() const noexcept {
    std::size_t n = 0;
    for (auto l : labels) n += l == Label::kForeground;
    return n;
}

}  // namespace vbbg
