#include "vbbg/mixture.hpp"

#include <cmath>
#include <numbers>

namespace vbbg {

bool Hyperparams::valid() const noexcept {
    return concentration > 0.0 && shape > 0.0 && rate > 0.0 && beta > 0.0 && std::isfinite(mean);
}

double GaussianComponent::stddev() const { return std::sqrt(variance); }

double PointMixture::total_weight() const noexcept {
    double total = 0.0;
    for (const auto& c : components) total += c.weight;
    return total;
}

void PointMixture::normalize_weights() noexcept {
    const double total = total_weight();
    if (!(total > 0.0)) return;
    for (auto& c : components) c.weight /= total;
}

double PointMixture::density(double x) const {
    double p = 0.0;
    for (const auto& c : components) p += c.weight * normal_density(x, c.mean, c.variance);
    return p;
}

double normal_density(double x, double mean, double variance) {
    const double d = x - mean;
    return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

MeanVariance mean_variance(std::span<const double> data) {
    MeanVariance out;
    if (data.empty()) return out;
    double sum = 0.0;
    for (double x : data) sum += x;
    out.mean = sum / static_cast<double>(data.size());
    double ss = 0.0;
    for (double x : data) {
        const double d = x - out.mean;
        ss += d * d;
    }
    out.variance = ss / static_cast<double>(data.size());
    return out;
}

}  // namespace vbbg
