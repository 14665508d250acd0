#include "vbbg/io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "vbbg/error.hpp"

namespace vbbg::io {

namespace {

constexpr std::size_t kTrfHeader = 12;

std::uint32_t load_u32_le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void store_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

bool is_pnm_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

// Header tokenizer for PNM: skips whitespace and '#' comments.
class PnmHeader {
public:
    explicit PnmHeader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t pos() const noexcept { return pos_; }

    std::uint32_t number(const char* what) {
        skip();
        const std::size_t start = pos_;
        std::uint64_t v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 0xFFFFFFFFu) throw ParseError(std::string("PGM ") + what + " too large", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError(std::string("PGM: expected ") + what, start);
        return static_cast<std::uint32_t>(v);
    }

    void single_space() {
        if (pos_ >= bytes_.size() || !is_pnm_space(bytes_[pos_])) {
            throw ParseError("PGM: expected whitespace after maxval", pos_);
        }
        ++pos_;
    }

private:
    void skip() {
        while (pos_ < bytes_.size()) {
            if (is_pnm_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

ThermalFrame parse_trf(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || bytes[0] != 'T' || bytes[1] != 'R' || bytes[2] != 'F' || bytes[3] != '1') {
        throw ParseError("TRF: bad magic", 0);
    }
    if (bytes.size() < kTrfHeader) throw ParseError("TRF: truncated header", bytes.size());
    const std::uint32_t width = load_u32_le(bytes.data() + 4);
    const std::uint32_t height = load_u32_le(bytes.data() + 8);
    if (width == 0 || height == 0) throw ParseError("TRF: zero dimension", 4);
    const std::uint64_t count = static_cast<std::uint64_t>(width) * height;
    const std::uint64_t expected = kTrfHeader + 4 * count;
    if (bytes.size() < expected) throw ParseError("TRF: truncated payload", bytes.size());
    if (bytes.size() > expected) throw ParseError("TRF: trailing bytes", expected);

    ThermalFrame frame(width, height);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t offset = kTrfHeader + 4 * i;
        const float v = std::bit_cast<float>(load_u32_le(bytes.data() + offset));
        if (!std::isfinite(v)) throw ParseError("TRF: non-finite value", offset);
        frame.values[i] = v;
    }
    return frame;
}

std::vector<std::uint8_t> encode_trf(const ThermalFrame& frame) {
    if (frame.width == 0 || frame.height == 0 || frame.values.size() != frame.width * frame.height) {
        throw InvalidInput("encode_trf: inconsistent frame dimensions");
    }
    std::vector<std::uint8_t> out;
    out.reserve(kTrfHeader + 4 * frame.values.size());
    for (char c : {'T', 'R', 'F', '1'}) out.push_back(static_cast<std::uint8_t>(c));
    store_u32_le(out, static_cast<std::uint32_t>(frame.width));
    store_u32_le(out, static_cast<std::uint32_t>(frame.height));
    for (std::size_t i = 0; i < frame.values.size(); ++i) {
        const auto v = static_cast<float>(frame.values[i]);
        if (!std::isfinite(v)) throw InvalidInput("encode_trf: non-finite value at pixel " + std::to_string(i));
        store_u32_le(out, std::bit_cast<std::uint32_t>(v));
    }
    return out;
}

ThermalFrame read_trf(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    try {
        return parse_trf(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.offset());
    }
}

void write_trf(const std::filesystem::path& path, const ThermalFrame& frame) { write_file(path, encode_trf(frame)); }

PgmImage parse_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw ParseError("PGM: bad magic", 0);
    if (bytes[1] == '2') throw ParseError("PGM: ASCII (P2) PGM is not supported, convert to binary P5", 0);
    if (bytes[1] != '5') throw ParseError("PGM: unsupported Netpbm variant P" + std::string(1, static_cast<char>(bytes[1])), 0);

    PnmHeader header(bytes);
    PgmImage img;
    img.width = header.number("width");
    img.height = header.number("height");
    const std::size_t maxval_at = header.pos();
    img.maxval = header.number("maxval");
    if (img.width == 0 || img.height == 0) throw ParseError("PGM: zero dimension", 2);
    if (img.maxval == 0 || img.maxval > 65535) throw ParseError("PGM: maxval out of range", maxval_at);
    header.single_space();

    const std::size_t sample_bytes = img.maxval < 256 ? 1 : 2;
    const std::size_t count = img.width * img.height;
    const std::size_t start = header.pos();
    if (bytes.size() - start < count * sample_bytes) throw ParseError("PGM: truncated raster", bytes.size());
    img.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t at = start + i * sample_bytes;
        const std::uint16_t v = sample_bytes == 1
                                    ? bytes[at]
                                    : static_cast<std::uint16_t>(bytes[at] << 8 | bytes[at + 1]);
        if (v > img.maxval) throw ParseError("PGM: sample exceeds maxval", at);
        img.samples[i] = v;
    }
    return img;
}

std::vector<std::uint8_t> encode_pgm(const PgmImage& image) {
    if (image.maxval == 0 || image.maxval > 65535) throw InvalidInput("encode_pgm: maxval out of range");
    if (image.samples.size() != image.width * image.height) throw InvalidInput("encode_pgm: size mismatch");
    const std::string header = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n" +
                               std::to_string(image.maxval) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const bool wide = image.maxval >= 256;
    for (auto v : image.samples) {
        if (v > image.maxval) throw InvalidInput("encode_pgm: sample exceeds maxval");
        if (wide) out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
    return out;
}

ThermalFrame read_pgm_frame(const std::filesystem::path& path) {
    const auto img = parse_pgm(read_file(path));
    ThermalFrame frame(img.width, img.height);
    for (std::size_t i = 0; i < img.samples.size(); ++i) frame.values[i] = img.samples[i];
    return frame;
}

MaskFrame read_pgm_mask(const std::filesystem::path& path) {
    const auto img = parse_pgm(read_file(path));
    MaskFrame mask(img.width, img.height);
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        mask.labels[i] = img.samples[i] != 0 ? Label::kForeground : Label::kBackground;
    }
    return mask;
}

void write_pgm_frame(const std::filesystem::path& path, const ThermalFrame& frame, std::uint32_t maxval) {
    PgmImage img{frame.width, frame.height, maxval, {}};
    img.samples.reserve(frame.size());
    for (double v : frame.values) {
        if (v < 0.0 || v > maxval || v != std::floor(v)) {
            throw InvalidInput("write_pgm_frame: value " + std::to_string(v) + " is not a gray level");
        }
        img.samples.push_back(static_cast<std::uint16_t>(v));
    }
    write_file(path, encode_pgm(img));
}

void write_mask(const std::filesystem::path& path, const MaskFrame& mask) {
    PgmImage img{mask.width, mask.height, 255, {}};
    img.samples.reserve(mask.size());
    for (auto l : mask.labels) img.samples.push_back(l == Label::kForeground ? 255 : 0);
    write_file(path, encode_pgm(img));
}

std::optional<std::size_t> SequenceManifest::first_mask_index() const {
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (masks[i]) return i;
    }
    return std::nullopt;
}

SequenceManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    SequenceManifest m;
    bool have_size = false;
    bool have_unit = false;
    std::istringstream lines{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::size_t offset = 0;
    auto fail = [&](const std::string& why) { throw ParseError("manifest line " + std::to_string(line_no) + ": " + why, offset); };

    while (std::getline(lines, line)) {
        ++line_no;
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        offset = line_start;
        if (key == "size") {
            long long w = 0, h = 0;
            if (!(ls >> w >> h) || w <= 0 || h <= 0) fail("expected `size <width> <height>`");
            m.width = static_cast<std::size_t>(w);
            m.height = static_cast<std::size_t>(h);
            have_size = true;
        } else if (key == "unit") {
            std::string unit;
            ls >> unit;
            if (unit == "kelvin") m.unit = ValueUnit::kKelvin;
            else if (unit == "gray8") m.unit = ValueUnit::kGray8;
            else fail("unit must be kelvin or gray8");
            have_unit = true;
        } else if (key == "frame") {
            std::string frame_path, mask_kw, mask_path;
            if (!(ls >> frame_path)) fail("frame without path");
            m.frames.push_back(resolve(base_dir, frame_path));
            if (ls >> mask_kw) {
                if (mask_kw != "mask" || !(ls >> mask_path)) fail("expected `frame <path> mask <path>`");
                m.masks.emplace_back(resolve(base_dir, mask_path));
            } else {
                m.masks.emplace_back(std::nullopt);
            }
        } else {
            fail("unknown directive `" + key + "`");
        }
        std::string extra;
        if (ls >> extra) fail("unexpected trailing token `" + extra + "`");
        offset = line_start + line.size() + 1;
    }
    if (!have_size) throw ParseError("manifest: missing `size` line", 0);
    if (!have_unit) throw ParseError("manifest: missing `unit` line", 0);
    if (m.frames.empty()) throw ParseError("manifest: no frames", text.size());

    if (const auto first = m.first_mask_index()) {
        for (std::size_t i = *first; i < m.masks.size(); ++i) {
            if (!m.masks[i]) {
                throw ParseError("manifest: masks must cover a contiguous suffix of frames; frame " +
                                     std::to_string(i) + " has none",
                                 0);
            }
        }
    }
    return m;
}

SequenceManifest read_manifest(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    auto m = parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                            path.parent_path());
    for (std::size_t i = 0; i < m.frames.size(); ++i) {
        if (!std::filesystem::exists(m.frames[i])) throw IoError("manifest references missing file " + m.frames[i].string());
        if (m.masks[i] && !std::filesystem::exists(*m.masks[i])) {
            throw IoError("manifest references missing file " + m.masks[i]->string());
        }
    }
    return m;
}

void write_manifest(const std::filesystem::path& path, const SequenceManifest& manifest) {
    std::string text = "size " + std::to_string(manifest.width) + " " + std::to_string(manifest.height) + "\n";
    text += manifest.unit == ValueUnit::kKelvin ? "unit kelvin\n" : "unit gray8\n";
    for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
        text += "frame " + manifest.frames[i].generic_string();
        if (i < manifest.masks.size() && manifest.masks[i]) text += " mask " + manifest.masks[i]->generic_string();
        text += "\n";
    }
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ThermalFrame load_frame(const SequenceManifest& manifest, std::size_t index) {
    if (index >= manifest.frames.size()) throw InvalidInput("load_frame: index out of range");
    const auto& path = manifest.frames[index];
    ThermalFrame frame = manifest.unit == ValueUnit::kKelvin ? read_trf(path) : read_pgm_frame(path);
    if (frame.width != manifest.width || frame.height != manifest.height) {
        throw InvalidInput(path.string() + ": frame is " + std::to_string(frame.width) + "x" +
                           std::to_string(frame.height) + ", manifest says " + std::to_string(manifest.width) +
                           "x" + std::to_string(manifest.height));
    }
    return frame;
}

}  // namespace vbbg::io
