#include "vbbg/model_io.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "vbbg/error.hpp"
#include "vbbg/io.hpp"

namespace vbbg::io {

namespace {

class Writer {
public:
    void bytes(std::initializer_list<std::uint8_t> b) { out_.insert(out_.end(), b); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::uint32_t v) { le(v, 4); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    void le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    Reader(std::span<const std::uint8_t> b, std::size_t start) : b_(b), pos_(start) {}
    std::size_t pos() const noexcept { return pos_; }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    double f64(const char* what) {
        const std::size_t at = pos_;
        const double v = std::bit_cast<double>(le(8));
        if (!std::isfinite(v)) throw ParseError(std::string("model: non-finite ") + what, at);
        return v;
    }
    bool done() const noexcept { return pos_ == b_.size(); }

private:
    std::uint64_t le(std::size_t n) {
        if (b_.size() - pos_ < n) throw ParseError("model: truncated", b_.size());
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
        pos_ += n;
        return v;
    }
    std::span<const std::uint8_t> b_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_models(std::size_t width, std::size_t height, std::span<const PixelModel> models) {
    if (models.size() != width * height) throw InvalidInput("encode_models: model count does not match dimensions");
    Writer w;
    w.bytes({'V', 'B', 'G', 'M'});
    w.u16(kModelVersion);
    w.u32(static_cast<std::uint32_t>(width));
    w.u32(static_cast<std::uint32_t>(height));
    for (const auto& m : models) {
        if (m.mixture.size() > std::numeric_limits<std::uint16_t>::max()) {
            throw InvalidInput("encode_models: too many components for the u16 count field");
        }
        w.u16(static_cast<std::uint16_t>(m.mixture.size()));
        for (const auto& c : m.mixture.components) {
            w.f64(c.weight);
            w.f64(c.mean);
            w.f64(c.variance);
        }
        w.u32(static_cast<std::uint32_t>(m.history.size()));
        for (double v : m.history) w.f64(v);
    }
    return w.take();
}

StoredModels parse_models(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || bytes[0] != 'V' || bytes[1] != 'B' || bytes[2] != 'G' || bytes[3] != 'M') {
        throw ParseError("model: bad magic", 0);
    }
    Reader r(bytes, 4);
    const std::uint16_t version = r.u16();
    if (version != kModelVersion) throw ParseError("model: unsupported version " + std::to_string(version), 4);
    StoredModels out;
    out.width = r.u32();
    out.height = r.u32();
    if (out.width == 0 || out.height == 0) throw ParseError("model: zero dimension", 6);
    const std::size_t pixels = out.width * out.height;
    out.models.reserve(pixels);
    for (std::size_t p = 0; p < pixels; ++p) {
        const std::size_t at = r.pos();
        const std::uint16_t count = r.u16();
        if (count == 0) throw ParseError("model: pixel " + std::to_string(p) + " has no components", at);
        PointMixture mix;
        mix.components.reserve(count);
        for (std::uint16_t k = 0; k < count; ++k) {
            GaussianComponent c;
            c.weight = r.f64("weight");
            c.mean = r.f64("mean");
            c.variance = r.f64("variance");
            mix.components.push_back(c);
        }
        const std::uint32_t n = r.u32();
        if (n == 0) throw ParseError("model: pixel " + std::to_string(p) + " has empty history", r.pos() - 4);
        PixelModel model(n, 2.5);
        model.mixture = std::move(mix);
        for (std::uint32_t i = 0; i < n; ++i) model.history.push_back(r.f64("history value"));
        out.models.push_back(std::move(model));
    }
    if (!r.done()) throw ParseError("model: trailing bytes", r.pos());
    return out;
}

void save_models(const std::filesystem::path& path, std::size_t width, std::size_t height,
                 std::span<const PixelModel> models) {
    write_file(path, encode_models(width, height, models));
}

StoredModels load_models(const std::filesystem::path& path) { return parse_models(read_file(path)); }

}  // namespace vbbg::io
