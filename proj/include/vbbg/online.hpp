#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <boost/circular_buffer.hpp>

#include "vbbg/mixture.hpp"

namespace vbbg {

/// Smallest neighbourhood half-width considered by the novelty search (Kelvin).
inline constexpr double kMinNeighbourhood = 1e-3;

/// Variance assigned to a spawned component.
enum class SpawnVariance {
    kShiftedUniform,      // ((2 eps)^2 - 1) / 12, floored
    kContinuousUniform,   // (2 eps)^2 / 12
};

struct OnlineConfig {
    SpawnVariance spawn_variance = SpawnVariance::kShiftedUniform;
};

/// One pixel: its mixture, the FIFO of the last `capacity` observations, and
/// the classification band width nu.
struct PixelModel {
    PointMixture mixture;
    boost::circular_buffer<double> history;
    double nu = 2.5;

    PixelModel() = default;
    PixelModel(std::size_t capacity, double band) : history(capacity), nu(band) {}

    /// Fixed sample count N used by every update rule.
    std::size_t capacity() const noexcept { return history.capacity(); }
    /// History values, oldest first.
    std::vector<double> ordered_history() const { return {history.begin(), history.end()}; }
};

struct Closest {
    std::size_t index = 0;
    double distance = 0.0;  // Mahalanobis |x - mu| / sigma
};

struct Novelty {
    double epsilon = kMinNeighbourhood;
    double density = 0.0;
};

struct MatchResult {
    std::size_t component = 0;
    double distance = 0.0;
    double density = 0.0;  // N(x | mu_c, sigma_c^2)
    double epsilon = 0.0;
    double novelty_density = 0.0;
    bool matched = false;
};

/// Mahalanobis distance from x to one component.
double mahalanobis(const GaussianComponent& c, double x);

/// Component with the smallest Mahalanobis distance; lowest index on ties.
/// Throws InvalidInput on an empty mixture.
Closest closest_component(const PointMixture& mixture, double x);

/// Maximizes (N_e / N) / (2e) over e, where N_e counts history values within
/// e of x (inclusive). The optimum lies on the sorted distances, floored at
/// kMinNeighbourhood. Throws InvalidInput on empty history or N == 0.
Novelty novelty_density(std::span<const double> history, std::size_t n, double x);

/// Following-the-leader update with ownership on component `owner`. All
/// right-hand sides use the pre-update parameters.
void update_matched(PointMixture& mixture, std::size_t owner, double x, std::size_t n);

/// Appends a component at x with weight 1/N after rescaling existing weights
/// to total (N - 1)/N.
void spawn_component(PointMixture& mixture, double x, double epsilon, std::size_t n,
                     SpawnVariance rule = SpawnVariance::kShiftedUniform);

/// Match-or-spawn for one observation, then history push and weight
/// renormalization. Requires a non-empty mixture and capacity >= 1.
MatchResult adapt(PixelModel& model, double x, const OnlineConfig& config = {});

}  // namespace vbbg
