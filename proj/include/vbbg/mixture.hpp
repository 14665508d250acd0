#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vbbg {

/// Lower bound on any component variance (Kelvin^2). Singleton clusters and
/// constant pixels would otherwise carry infinite precision.
inline constexpr double kVarianceFloor = 1e-4;

/// Lower bound on the global data variance used for the mean-precision prior.
inline constexpr double kDataVarianceFloor = 1e-6;

/// Fixed prior constants of the Dirichlet / Normal-Gamma model.
struct Hyperparams {
    double concentration = 1.0;  // Dirichlet parameter shared by all components
    double shape = 1e-3;         // Gamma shape of the precision prior
    double rate = 1e-3;          // Gamma rate of the precision prior
    double mean = 0.0;           // prior location of component means
    double beta = 1.0;           // scale of the prior mean precision (beta * tau)

    bool valid() const noexcept;
};

/// Posterior parameters of one component: Dirichlet weight, Normal-Gamma over (mean, precision).
struct VariationalComponent {
    double concentration = 0.0;
    double mean = 0.0;
    double beta = 0.0;
    double shape = 0.0;
    double rate = 0.0;
};

/// Responsibility-weighted statistics of one component.
struct ComponentStats {
    double count = 0.0;     // N_k
    double centroid = 0.0;  // weighted mean
    double scatter = 0.0;   // weighted variance about the centroid
};

using SufficientStats = std::vector<ComponentStats>;

/// Row-major N x K matrix of posterior assignment probabilities.
class Responsibilities {
public:
    Responsibilities() = default;
    Responsibilities(std::size_t samples, std::size_t components)
        : samples_(samples), components_(components), values_(samples * components, 0.0) {}

    void resize(std::size_t samples, std::size_t components) {
        samples_ = samples;
        components_ = components;
        values_.assign(samples * components, 0.0);
    }

    std::size_t samples() const noexcept { return samples_; }
    std::size_t components() const noexcept { return components_; }

    std::span<double> row(std::size_t n) noexcept {
        return {values_.data() + n * components_, components_};
    }
    std::span<const double> row(std::size_t n) const noexcept {
        return {values_.data() + n * components_, components_};
    }
    double operator()(std::size_t n, std::size_t k) const noexcept {
        return values_[n * components_ + k];
    }

private:
    std::size_t samples_ = 0;
    std::size_t components_ = 0;
    std::vector<double> values_;
};

/// Point estimate of one Gaussian component.
struct GaussianComponent {
    double weight = 0.0;
    double mean = 0.0;
    double variance = kVarianceFloor;

    double stddev() const;
};

/// Collapsed mixture used for online adaptation and classification.
struct PointMixture {
    std::vector<GaussianComponent> components;

    std::size_t size() const noexcept { return components.size(); }
    bool empty() const noexcept { return components.empty(); }

    double total_weight() const noexcept;
    /// Rescales weights to sum to one. No-op when the total is zero.
    void normalize_weights() noexcept;
    /// Mixture density at x.
    double density(double x) const;
};

/// Univariate normal density N(x | mean, variance).
double normal_density(double x, double mean, double variance);

/// Arithmetic mean and population variance (two-pass).
struct MeanVariance {
    double mean = 0.0;
    double variance = 0.0;
};
MeanVariance mean_variance(std::span<const double> data);

}  // namespace vbbg
