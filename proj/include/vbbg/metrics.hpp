#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "vbbg/frame.hpp"

namespace vbbg {

/// Pixel-wise confusion counts with foreground as the positive class.
/// Ratios with a zero denominator are reported as 0.
struct PixelMetrics {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    static PixelMetrics from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn);
};

/// Counts for one predicted/truth pair. Throws InvalidInput on size mismatch.
PixelMetrics compare_masks(const MaskFrame& predicted, const MaskFrame& truth);

struct EvaluationReport {
    std::vector<std::size_t> frame_indices;  // caller-facing index per entry
    std::vector<PixelMetrics> per_frame;
    PixelMetrics aggregate;  // counts pooled over every pixel of every frame
    std::size_t best_frame = 0;   // position in per_frame with the highest F1
    std::size_t worst_frame = 0;  // and the lowest; ties go to the earlier frame
};

/// Throws InvalidInput when the lists are misaligned or empty.
EvaluationReport evaluate(std::span<const MaskFrame> predicted, std::span<const MaskFrame> truth,
                          std::span<const std::size_t> frame_indices = {});

/// CSV with columns frame_index,tp,fp,fn,tn,precision,recall,f1 and a final `aggregate` row.
void write_report_csv(std::ostream& out, const EvaluationReport& report);

}  // namespace vbbg
