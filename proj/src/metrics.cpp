#include "vbbg/metrics.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "vbbg/error.hpp"

namespace vbbg {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string csv_row(const std::string& label, const PixelMetrics& m) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%llu,%llu,%llu,%llu,%.9f,%.9f,%.9f\n", label.c_str(),
                  static_cast<unsigned long long>(m.tp), static_cast<unsigned long long>(m.fp),
                  static_cast<unsigned long long>(m.fn), static_cast<unsigned long long>(m.tn), m.precision,
                  m.recall, m.f1);
    return buf;
}

}  // namespace

PixelMetrics PixelMetrics::from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
    PixelMetrics m{tp, fp, fn, tn, 0.0, 0.0, 0.0};
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    const double s = m.precision + m.recall;
    m.f1 = s > 0.0 ? 2.0 * m.precision * m.recall / s : 0.0;
    return m;
}

PixelMetrics compare_masks(const MaskFrame& predicted, const MaskFrame& truth) {
    if (predicted.width != truth.width || predicted.height != truth.height ||
        predicted.size() != truth.size()) {
        throw InvalidInput("compare_masks: predicted " + std::to_string(predicted.width) + "x" +
                           std::to_string(predicted.height) + " vs truth " + std::to_string(truth.width) + "x" +
                           std::to_string(truth.height));
    }
    std::uint64_t c[2][2] = {{0, 0}, {0, 0}};  // [predicted][truth]
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++c[static_cast<int>(predicted.labels[i])][static_cast<int>(truth.labels[i])];
    }
    return PixelMetrics::from_counts(c[1][1], c[1][0], c[0][1], c[0][0]);
}

EvaluationReport evaluate(std::span<const MaskFrame> predicted, std::span<const MaskFrame> truth,
                          std::span<const std::size_t> frame_indices) {
    if (predicted.size() != truth.size()) {
        throw InvalidInput("evaluate: " + std::to_string(predicted.size()) + " predicted masks vs " +
                           std::to_string(truth.size()) + " ground-truth masks");
    }
    if (predicted.empty()) throw InvalidInput("evaluate: no masks");
    if (!frame_indices.empty() && frame_indices.size() != predicted.size()) {
        throw InvalidInput("evaluate: frame index list misaligned");
    }

    EvaluationReport report;
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto m = compare_masks(predicted[i], truth[i]);
        tp += m.tp;
        fp += m.fp;
        fn += m.fn;
        tn += m.tn;
        report.per_frame.push_back(m);
        report.frame_indices.push_back(frame_indices.empty() ? i : frame_indices[i]);
        if (m.f1 > report.per_frame[report.best_frame].f1) report.best_frame = i;
        if (m.f1 < report.per_frame[report.worst_frame].f1) report.worst_frame = i;
    }
    report.aggregate = PixelMetrics::from_counts(tp, fp, fn, tn);
    return report;
}

void write_report_csv(std::ostream& out, const EvaluationReport& report) {
    out << "frame_index,tp,fp,fn,tn,precision,recall,f1\n";
    for (std::size_t i = 0; i < report.per_frame.size(); ++i) {
        out << csv_row(std::to_string(report.frame_indices[i]), report.per_frame[i]);
    }
    out << csv_row("aggregate", report.aggregate);
}

}  // namespace vbbg
