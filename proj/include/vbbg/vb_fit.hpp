#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vbbg/mixture.hpp"

namespace vbbg {

/// Result of k-means++ / Lloyd seeding. Empty clusters are dropped, so
/// `counts.size()` may be smaller than the requested cluster count.
struct KMeansSeed {
    std::vector<std::size_t> assignments;  // cluster index per sample
    std::vector<std::size_t> counts;       // samples per cluster
    PointMixture mixture;                  // weight = count/N, centroid, floored variance
    std::vector<VariationalComponent> components;
};

/// Seeds the variational posterior from k-means clusters:
/// concentration = count, mean = centroid, beta = 1/count, shape = 1/variance, rate = 1.
/// Throws InvalidInput for empty or non-finite data, or max_components outside [1, N].
KMeansSeed kmeans_seed(std::span<const double> data, std::size_t max_components, std::uint64_t seed);

/// Uninformative priors: concentration N/K, shape = rate = 1e-3, mean of the
/// data, beta = rate / (shape * variance) with the variance floored.
Hyperparams init_hyperparams(std::span<const double> data, std::size_t max_components);

struct EStepResult {
    Responsibilities responsibilities;
    SufficientStats stats;
};

/// Responsibilities from the expected log weights, log precisions and
/// quadratic terms, normalized per sample in log space.
/// Throws NumericalError naming the sample when a row has no finite weight.
EStepResult e_step(std::span<const double> data, std::span<const VariationalComponent> components);

/// Same as above, reusing the buffers in `out`.
void e_step(std::span<const double> data, std::span<const VariationalComponent> components,
            EStepResult& out);

/// Conjugate posterior updates for every component given its statistics.
std::vector<VariationalComponent> m_step(std::span<const ComponentStats> stats, const Hyperparams& prior);

/// Variational lower bound on log p(data) for the given posterior, evaluated
/// with the responsibilities it induces.
double lower_bound(std::span<const double> data, std::span<const VariationalComponent> components,
                   const Hyperparams& prior);

enum class WeightPrior {
    kSparse,             // fixed small concentration, lets unused components drain
    kSharePerComponent,  // concentration N / K_max
};

struct FitConfig {
    double tolerance = 1e-6;  // max relative parameter change
    std::size_t max_iterations = 100;
    std::uint64_t seed = 0;
    WeightPrior weight_prior = WeightPrior::kSparse;
    double sparse_concentration = 1e-3;
    bool prune_every_iteration = false;
    bool delete_moves = true;
};

struct FitResult {
    PointMixture mixture;
    std::size_t seeded_components = 0;
    std::size_t iterations = 0;        // main EM loop, up to first convergence
    std::size_t total_iterations = 0;  // including delete-move refits
    bool converged = false;
    double lower_bound = 0.0;
};

/// Offline variational fit with automatic component count.
/// Requires at least two finite samples; max_components is clamped to N.
FitResult fit(std::span<const double> data, std::size_t max_components, const FitConfig& config = {});

/// min(n, 10)
std::size_t default_max_components(std::size_t n) noexcept;

}  // namespace vbbg
