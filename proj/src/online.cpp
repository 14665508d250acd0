#include "vbbg/online.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vbbg/error.hpp"

namespace vbbg {

double mahalanobis(const GaussianComponent& c, double x) {
    return std::abs(x - c.mean) / std::sqrt(c.variance);
}

Closest closest_component(const PointMixture& mixture, double x) {
    if (mixture.empty()) throw InvalidInput("closest_component: empty mixture");
    Closest best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < mixture.size(); ++k) {
        const double d = mahalanobis(mixture.components[k], x);
        if (d < best.distance) best = {k, d};
    }
    return best;
}

namespace {

// Sorts `dist` in place. Between consecutive distances N_e is constant and the
// density decays as 1/e, so only the breakpoints need evaluating.
Novelty best_neighbourhood(std::vector<double>& dist, std::size_t n) {
    std::sort(dist.begin(), dist.end());
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    Novelty best{kMinNeighbourhood, -1.0};
    std::size_t covered = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double e = std::max(dist[i], kMinNeighbourhood);
        while (covered < dist.size() && dist[covered] <= e) ++covered;
        const double p = static_cast<double>(covered) * scale / e;
        if (p > best.density) best = {e, p};
    }
    return best;
}

}  // namespace

Novelty novelty_density(std::span<const double> history, std::size_t n, double x) {
    if (history.empty()) throw InvalidInput("novelty_density: empty history");
    if (n == 0) throw InvalidInput("novelty_density: N must be positive");
    std::vector<double> dist(history.size());
    std::transform(history.begin(), history.end(), dist.begin(), [x](double h) { return std::abs(h - x); });
    return best_neighbourhood(dist, n);
}

void update_matched(PointMixture& mixture, std::size_t owner, double x, std::size_t n) {
    if (owner >= mixture.size()) throw InvalidInput("update_matched: owner index out of range");
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k < mixture.size(); ++k) {
        auto& c = mixture.components[k];
        const double w = c.weight;
        if (k != owner) {
            c.weight = w - w / nd;
            continue;
        }
        const double lead = w * nd + 1.0;
        const double d = x - c.mean;
        c.weight = w + (1.0 - w) / nd;
        c.mean = c.mean + d / lead;
        c.variance = c.variance + (w * nd * d * d / (lead * lead) - c.variance / lead);
        c.variance = std::max(c.variance, kVarianceFloor);
    }
}

void spawn_component(PointMixture& mixture, double x, double epsilon, std::size_t n, SpawnVariance rule) {
    if (!(epsilon > 0.0)) throw InvalidInput("spawn_component: epsilon must be positive");
    if (n == 0) throw InvalidInput("spawn_component: N must be positive");
    const double nd = static_cast<double>(n);
    const double total = mixture.total_weight();
    if (total > 0.0) {
        const double scale = ((nd - 1.0) / nd) / total;
        for (auto& c : mixture.components) c.weight *= scale;
    }
    const double width = 2.0 * epsilon;
    const double variance = rule == SpawnVariance::kShiftedUniform ? (width * width - 1.0) / 12.0
                                                                   : width * width / 12.0;
    mixture.components.push_back({1.0 / nd, x, std::max(variance, kVarianceFloor)});
}

MatchResult adapt(PixelModel& model, double x, const OnlineConfig& config) {
    if (model.mixture.empty()) throw InvalidInput("adapt: model is not trained");
    const std::size_t n = model.capacity();
    if (n == 0) throw InvalidInput("adapt: history capacity must be positive");

    MatchResult out;
    const auto closest = closest_component(model.mixture, x);
    const auto& c = model.mixture.components[closest.index];
    out.component = closest.index;
    out.distance = closest.distance;
    out.density = normal_density(x, c.mean, c.variance);

    if (model.history.empty()) {
        // No reference sample: the novelty density is zero and x always matches.
        out.epsilon = kMinNeighbourhood;
        out.novelty_density = 0.0;
    } else {
        // Same result as novelty_density over the history, without
        // rearranging the ring buffer or allocating per call.
        thread_local std::vector<double> dist;
        dist.resize(model.history.size());
        std::transform(model.history.begin(), model.history.end(), dist.begin(),
                       [x](double h) { return std::abs(h - x); });
        const auto novelty = best_neighbourhood(dist, n);
        out.epsilon = novelty.epsilon;
        out.novelty_density = novelty.density;
    }
    out.matched = out.density >= out.novelty_density;

    if (out.matched) {
        update_matched(model.mixture, closest.index, x, n);
    } else {
        spawn_component(model.mixture, x, out.epsilon, n, config.spawn_variance);
    }
    model.history.push_back(x);
    model.mixture.normalize_weights();
    return out;
}

}  // namespace vbbg
