#include "vbbg/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "vbbg/error.hpp"
#include "vbbg/io.hpp"

namespace vbbg {

namespace {

struct Rect {
    long long x0, y0, x1, y1;  // half-open
};

Rect blob_rect(const SynthSpec& s, std::size_t frame) {
    const double t = static_cast<double>(frame) - static_cast<double>(s.blob_first_frame);
    const auto x = static_cast<long long>(std::floor(s.blob_x + s.blob_vx * t));
    const auto y = static_cast<long long>(std::floor(s.blob_y + s.blob_vy * t));
    return {x, y, x + static_cast<long long>(s.blob_width), y + static_cast<long long>(s.blob_height)};
}

bool blob_active(const SynthSpec& s, std::size_t frame) {
    return s.blob_delta != 0.0 && s.blob_width > 0 && s.blob_height > 0 && frame >= s.blob_first_frame;
}

std::string frame_name(const char* stem, std::size_t i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, i, ext);
    return buf;
}

}  // namespace

void SynthSpec::validate() const {
    if (width == 0 || height == 0) throw InvalidInput("synth: zero frame dimension");
    if (frames == 0) throw InvalidInput("synth: zero frames");
    if (train_frames > frames) throw InvalidInput("synth: train_frames exceeds frames");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw InvalidInput("synth: noise must be non-negative");
    if (!std::isfinite(background) || !std::isfinite(blob_delta) || !std::isfinite(drift_amplitude)) {
        throw InvalidInput("synth: non-finite temperature parameter");
    }
    if (drift_amplitude != 0.0 && !(drift_period > 0.0)) throw InvalidInput("synth: drift_period must be positive");
    for (std::size_t f = 0; f < frames; ++f) {
        if (!blob_active(*this, f)) continue;
        const auto r = blob_rect(*this, f);
        if (r.x0 < 0 || r.y0 < 0 || r.x1 > static_cast<long long>(width) || r.y1 > static_cast<long long>(height)) {
            throw InvalidInput("synth: blob leaves the frame at frame " + std::to_string(f) + " (x " +
                               std::to_string(r.x0) + ".." + std::to_string(r.x1) + ", y " + std::to_string(r.y0) +
                               ".." + std::to_string(r.y1) + ")");
        }
    }
}

SynthSpec parse_synth_spec(std::string_view text) {
    SynthSpec s;
    std::istringstream lines{std::string(text)};
    std::string line;
    std::size_t offset = 0;
    while (std::getline(lines, line)) {
        const std::size_t at = offset;
        offset += line.size() + 1;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        auto fail = [&] { throw ParseError("synth spec: bad value for `" + key + "`", at); };
        auto real = [&](double& v) { if (!(ls >> v)) fail(); };
        auto count = [&](std::size_t& v) {
            long long t = -1;
            if (!(ls >> t) || t < 0) fail();
            v = static_cast<std::size_t>(t);
        };
        if (key == "size") { count(s.width); count(s.height); }
        else if (key == "frames") count(s.frames);
        else if (key == "train_frames") count(s.train_frames);
        else if (key == "background") real(s.background);
        else if (key == "noise") real(s.noise);
        else if (key == "drift") { real(s.drift_amplitude); real(s.drift_period); }
        else if (key == "blob_size") { count(s.blob_width); count(s.blob_height); }
        else if (key == "blob_delta") real(s.blob_delta);
        else if (key == "blob_start") { real(s.blob_x); real(s.blob_y); }
        else if (key == "blob_velocity") { real(s.blob_vx); real(s.blob_vy); }
        else if (key == "blob_first_frame") count(s.blob_first_frame);
        else throw ParseError("synth spec: unknown key `" + key + "`", at);
        std::string extra;
        if (ls >> extra) throw ParseError("synth spec: trailing token `" + extra + "`", at);
    }
    return s;
}

SynthSpec read_synth_spec(const std::filesystem::path& path) {
    const auto bytes = io::read_file(path);
    return parse_synth_spec(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

SynthSequence synth_sequence(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    SynthSequence seq;
    seq.frames.reserve(spec.frames);
    seq.truth.reserve(spec.frames);
    for (std::size_t f = 0; f < spec.frames; ++f) {
        double base = spec.background;
        if (spec.drift_amplitude != 0.0) {
            base += spec.drift_amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(f) / spec.drift_period);
        }
        ThermalFrame frame(spec.width, spec.height);
        MaskFrame truth(spec.width, spec.height);
        if (blob_active(spec, f)) {
            const auto r = blob_rect(spec, f);
            for (auto y = r.y0; y < r.y1; ++y) {
                for (auto x = r.x0; x < r.x1; ++x) {
                    truth.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = Label::kForeground;
                }
            }
        }
        for (std::size_t i = 0; i < frame.size(); ++i) {
            double v = base + spec.noise * noise(rng);
            if (truth.labels[i] == Label::kForeground) v += spec.blob_delta;
            frame.values[i] = static_cast<float>(v);
        }
        seq.frames.push_back(std::move(frame));
        seq.truth.push_back(std::move(truth));
    }
    return seq;
}

void write_synth_sequence(const std::filesystem::path& dir, const SynthSpec& spec, const SynthSequence& seq) {
    std::filesystem::create_directories(dir);
    io::SequenceManifest manifest;
    manifest.width = spec.width;
    manifest.height = spec.height;
    manifest.unit = io::ValueUnit::kKelvin;
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
        const auto frame_file = frame_name("frame", f, "trf");
        io::write_trf(dir / frame_file, seq.frames[f]);
        manifest.frames.emplace_back(frame_file);
        if (f >= spec.train_frames) {
            const auto mask_file = frame_name("mask", f, "pgm");
            io::write_mask(dir / mask_file, seq.truth[f]);
            manifest.masks.emplace_back(mask_file);
        } else {
            manifest.masks.emplace_back(std::nullopt);
        }
    }
    io::write_manifest(dir / "manifest.txt", manifest);
}

}  // namespace vbbg
