#include "vbbg/vb_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "vbbg/digamma.hpp"
#include "vbbg/error.hpp"

namespace vbbg {

namespace {

constexpr double kPriorShape = 1e-3;
constexpr double kPriorRate = 1e-3;
constexpr std::size_t kLloydIterations = 50;
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_finite(std::span<const double> data, const char* who) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i])) {
            throw InvalidInput(std::string(who) + ": non-finite sample at index " + std::to_string(i));
        }
    }
}

std::size_t nearest_center(double x, const std::vector<double>& centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centers.size(); ++k) {
        const double d = (x - centers[k]) * (x - centers[k]);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

double max_relative_change(std::span<const VariationalComponent> before,
                           std::span<const VariationalComponent> after) {
    auto rel = [](double old_v, double new_v) {
        return std::abs(new_v - old_v) / (std::abs(old_v) + 1e-12);
    };
    double worst = 0.0;
    for (std::size_t k = 0; k < before.size(); ++k) {
        const auto& a = before[k];
        const auto& b = after[k];
        worst = std::max({worst, rel(a.concentration, b.concentration), rel(a.mean, b.mean),
                          rel(a.beta, b.beta), rel(a.shape, b.shape), rel(a.rate, b.rate)});
    }
    return worst;
}

double total_concentration(std::span<const VariationalComponent> components) {
    double total = 0.0;
    for (const auto& c : components) total += c.concentration;
    return total;
}

// Drops components whose expected weight is below 1/N. Keeps the heaviest
// one when nothing would survive. Returns true when anything was removed.
bool prune(std::vector<VariationalComponent>& components, std::size_t n) {
    const double total = total_concentration(components);
    const double threshold = 1.0 / static_cast<double>(n);
    std::vector<VariationalComponent> kept;
    kept.reserve(components.size());
    for (const auto& c : components) {
        if (c.concentration / total >= threshold) kept.push_back(c);
    }
    if (kept.empty()) {
        auto heaviest = std::max_element(components.begin(), components.end(),
                                         [](const auto& a, const auto& b) {
                                             return a.concentration < b.concentration;
                                         });
        kept.push_back(*heaviest);
    }
    const bool removed = kept.size() != components.size();
    components = std::move(kept);
    return removed;
}

struct EmOutcome {
    std::size_t iterations = 0;
    bool converged = false;
};

EmOutcome run_em(std::span<const double> data, const Hyperparams& prior,
                 std::vector<VariationalComponent>& components, const FitConfig& config,
                 EStepResult& workspace) {
    EmOutcome out;
    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        out.iterations = it;
        e_step(data, components, workspace);
        auto next = m_step(workspace.stats, prior);
        if (config.prune_every_iteration && prune(next, data.size())) {
            components = std::move(next);
            continue;
        }
        const double delta = max_relative_change(components, next);
        components = std::move(next);
        if (delta < config.tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

PointMixture collapse(std::span<const VariationalComponent> components) {
    PointMixture mixture;
    const double total = total_concentration(components);
    for (const auto& c : components) {
        mixture.components.push_back(
            {c.concentration / total, c.mean, std::max(c.rate / c.shape, kVarianceFloor)});
    }
    mixture.normalize_weights();
    return mixture;
}

}  // namespace

std::size_t default_max_components(std::size_t n) noexcept { return std::min<std::size_t>(n, 10); }

KMeansSeed kmeans_seed(std::span<const double> data, std::size_t max_components, std::uint64_t seed) {
    const std::size_t n = data.size();
    if (n == 0) throw InvalidInput("kmeans_seed: empty data");
    if (max_components < 1) throw InvalidInput("kmeans_seed: max_components must be at least 1");
    if (max_components > n) {
        throw InvalidInput("kmeans_seed: max_components " + std::to_string(max_components) +
                           " exceeds sample count " + std::to_string(n));
    }
    require_finite(data, "kmeans_seed");

    // k-means++ seeding.
    std::mt19937_64 rng(seed);
    std::vector<double> centers;
    centers.reserve(max_components);
    const auto first = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
    centers.push_back(data[first]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = (data[i] - centers[0]) * (data[i] - centers[0]);
    while (centers.size() < max_components) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        if (!(total > 0.0)) break;  // every sample already coincides with a center
        const double target = uniform01(rng) * total;
        std::size_t pick = n;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            pick = i;
            acc += d2[i];
            if (acc > target) break;
        }
        const double c = data[pick];
        centers.push_back(c);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], (data[i] - c) * (data[i] - c));
    }

    // Lloyd iterations.
    std::vector<std::size_t> assign(n);
    for (std::size_t i = 0; i < n; ++i) assign[i] = nearest_center(data[i], centers);
    std::vector<double> sums(centers.size());
    std::vector<std::size_t> counts(centers.size());
    for (std::size_t iter = 0; iter < kLloydIterations; ++iter) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[assign[i]] += data[i];
            ++counts[assign[i]];
        }
        for (std::size_t k = 0; k < centers.size(); ++k) {
            if (counts[k] > 0) centers[k] = sums[k] / static_cast<double>(counts[k]);
        }
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = nearest_center(data[i], centers);
            if (k != assign[i]) {
                assign[i] = k;
                changed = true;
            }
        }
        if (!changed) break;
    }

    // Compact away empty clusters and compute per-cluster moments.
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];
    std::vector<std::size_t> remap(centers.size(), 0);
    std::size_t live = 0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        if (counts[k] > 0) remap[k] = live++;
    }

    KMeansSeed out;
    out.assignments.resize(n);
    out.counts.assign(live, 0);
    std::vector<double> mean(live, 0.0);
    std::vector<double> scatter(live, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = remap[assign[i]];
        out.assignments[i] = k;
        ++out.counts[k];
        mean[k] += data[i];
    }
    for (std::size_t k = 0; k < live; ++k) mean[k] /= static_cast<double>(out.counts[k]);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = out.assignments[i];
        scatter[k] += (data[i] - mean[k]) * (data[i] - mean[k]);
    }

    for (std::size_t k = 0; k < live; ++k) {
        const double count = static_cast<double>(out.counts[k]);
        const double variance = std::max(scatter[k] / count, kVarianceFloor);
        out.mixture.components.push_back({count / static_cast<double>(n), mean[k], variance});
        out.components.push_back({count, mean[k], 1.0 / count, 1.0 / variance, 1.0});
    }
    return out;
}

Hyperparams init_hyperparams(std::span<const double> data, std::size_t max_components) {
    if (data.empty()) throw InvalidInput("init_hyperparams: empty data");
    if (max_components < 1) throw InvalidInput("init_hyperparams: max_components must be at least 1");
    const auto mv = mean_variance(data);
    const double v0 = std::max(mv.variance, kDataVarianceFloor);
    Hyperparams h;
    h.concentration = static_cast<double>(data.size()) / static_cast<double>(max_components);
    h.shape = kPriorShape;
    h.rate = kPriorRate;
    h.mean = mv.mean;
    h.beta = h.rate / (h.shape * v0);
    return h;
}

EStepResult e_step(std::span<const double> data, std::span<const VariationalComponent> components) {
    EStepResult out;
    e_step(data, components, out);
    return out;
}

void e_step(std::span<const double> data, std::span<const VariationalComponent> components,
            EStepResult& out) {
    const std::size_t n = data.size();
    const std::size_t kk = components.size();
    if (kk == 0) throw InvalidInput("e_step: no components");
    out.responsibilities.resize(n, kk);
    out.stats.assign(kk, ComponentStats{});

    // Per-component terms that do not depend on the sample:
    // log rho = E[ln w] + E[ln tau]/2 - ln(2 pi)/2 - (E[tau](x - m)^2 + 1/beta)/2
    std::vector<double> offset(kk);
    std::vector<double> half_precision(kk);
    const double psi_total = digamma(total_concentration(components));
    for (std::size_t k = 0; k < kk; ++k) {
        const auto& c = components[k];
        const double e_log_weight = digamma(c.concentration) - psi_total;
        const double e_log_precision = digamma(c.shape) - std::log(c.rate);
        offset[k] = e_log_weight + 0.5 * e_log_precision - kHalfLog2Pi - 0.5 / c.beta;
        half_precision[k] = 0.5 * c.shape / c.rate;
    }

    for (std::size_t i = 0; i < n; ++i) {
        auto row = out.responsibilities.row(i);
        const double x = data[i];
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < kk; ++k) {
            const double d = x - components[k].mean;
            row[k] = offset[k] - half_precision[k] * d * d;
            if (row[k] > peak) peak = row[k];
        }
        if (!std::isfinite(peak)) {
            throw NumericalError("e_step: no finite log-weight for sample " + std::to_string(i), i);
        }
        double norm = 0.0;
        for (std::size_t k = 0; k < kk; ++k) {
            // exp(-60) is far below the rounding error of the peak term.
            const double z = row[k] - peak;
            row[k] = z < -60.0 ? 0.0 : std::exp(z);
            norm += row[k];
        }
        if (!std::isfinite(norm)) {
            throw NumericalError("e_step: non-finite normalizer for sample " + std::to_string(i), i);
        }
        for (std::size_t k = 0; k < kk; ++k) {
            row[k] /= norm;
            out.stats[k].count += row[k];
            out.stats[k].centroid += row[k] * x;
        }
    }

    for (auto& s : out.stats) {
        if (s.count > 0.0) s.centroid /= s.count;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = out.responsibilities.row(i);
        for (std::size_t k = 0; k < kk; ++k) {
            const double d = data[i] - out.stats[k].centroid;
            out.stats[k].scatter += row[k] * d * d;
        }
    }
    for (auto& s : out.stats) {
        s.scatter = s.count > 0.0 ? s.scatter / s.count : 0.0;
    }
}

std::vector<VariationalComponent> m_step(std::span<const ComponentStats> stats, const Hyperparams& prior) {
    std::vector<VariationalComponent> out;
    out.reserve(stats.size());
    for (const auto& s : stats) {
        VariationalComponent c;
        c.concentration = prior.concentration + s.count;
        c.beta = prior.beta + s.count;
        c.mean = (prior.beta * prior.mean + s.count * s.centroid) / c.beta;
        c.shape = prior.shape + 0.5 * s.count;
        const double shift = s.centroid - prior.mean;
        c.rate = prior.rate +
                 0.5 * (s.count * s.scatter + (prior.beta * s.count / (prior.beta + s.count)) * shift * shift);
        out.push_back(c);
    }
    return out;
}

double lower_bound(std::span<const double> data, std::span<const VariationalComponent> components,
                   const Hyperparams& prior) {
    using boost::math::lgamma;
    const std::size_t kk = components.size();
    const auto es = e_step(data, components);
    const double log_2pi = 2.0 * kHalfLog2Pi;

    const double total = total_concentration(components);
    const double psi_total = digamma(total);

    double bound = 0.0;
    // Dirichlet terms: E[ln p(w)] - E[ln q(w)].
    bound += lgamma(static_cast<double>(kk) * prior.concentration) -
             static_cast<double>(kk) * lgamma(prior.concentration);
    bound -= lgamma(total);

    for (std::size_t k = 0; k < kk; ++k) {
        const auto& c = components[k];
        const auto& s = es.stats[k];
        const double e_log_w = digamma(c.concentration) - psi_total;
        const double e_log_tau = digamma(c.shape) - std::log(c.rate);
        const double e_tau = c.shape / c.rate;

        bound += (prior.concentration - 1.0) * e_log_w;
        bound -= (c.concentration - 1.0) * e_log_w - lgamma(c.concentration);

        // E[ln p(x | z, mu, tau)]
        const double spread = s.scatter + (s.centroid - c.mean) * (s.centroid - c.mean);
        bound += 0.5 * s.count * (e_log_tau - 1.0 / c.beta - e_tau * spread - log_2pi);

        // E[ln p(z | w)]
        bound += s.count * e_log_w;

        // E[ln p(mu, tau)]
        const double dm = c.mean - prior.mean;
        bound += 0.5 * (std::log(prior.beta) - log_2pi + e_log_tau - prior.beta / c.beta -
                        prior.beta * e_tau * dm * dm);
        bound += prior.shape * std::log(prior.rate) - lgamma(prior.shape) +
                 (prior.shape - 1.0) * e_log_tau - prior.rate * e_tau;

        // -E[ln q(mu, tau)]
        bound -= 0.5 * (std::log(c.beta) - log_2pi + e_log_tau - 1.0);
        bound -= c.shape * std::log(c.rate) - lgamma(c.shape) + (c.shape - 1.0) * e_log_tau - c.shape;
    }

    // -E[ln q(z)]
    const auto& r = es.responsibilities;
    for (std::size_t i = 0; i < r.samples(); ++i) {
        for (double v : r.row(i)) {
            if (v > 0.0) bound -= v * std::log(v);
        }
    }
    return bound;
}

FitResult fit(std::span<const double> data, std::size_t max_components, const FitConfig& config) {
    const std::size_t n = data.size();
    if (n < 2) throw InvalidInput("fit: need at least two samples, got " + std::to_string(n));
    if (max_components < 1) throw InvalidInput("fit: max_components must be at least 1");
    require_finite(data, "fit");
    const std::size_t kmax = std::min(max_components, n);

    const auto seeded = kmeans_seed(data, kmax, config.seed);
    Hyperparams prior = init_hyperparams(data, kmax);
    if (config.weight_prior == WeightPrior::kSparse) prior.concentration = config.sparse_concentration;

    FitResult result;
    result.seeded_components = seeded.components.size();

    EStepResult workspace;
    auto components = seeded.components;
    const auto main = run_em(data, prior, components, config, workspace);
    result.iterations = main.iterations;
    result.total_iterations = main.iterations;
    result.converged = main.converged;
    prune(components, n);

    if (config.delete_moves && components.size() > 1) {
        double best = lower_bound(data, components, prior);
        bool accepted = true;
        while (accepted && components.size() > 1) {
            accepted = false;
            std::vector<std::size_t> order(components.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return components[a].concentration < components[b].concentration;
            });
            for (std::size_t victim : order) {
                auto candidate = components;
                candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(victim));
                const auto refit = run_em(data, prior, candidate, config, workspace);
                result.total_iterations += refit.iterations;
                prune(candidate, n);
                const double bound = lower_bound(data, candidate, prior);
                if (bound > best) {
                    best = bound;
                    components = std::move(candidate);
                    accepted = true;
                    break;
                }
            }
        }
        result.lower_bound = best;
    } else {
        result.lower_bound = lower_bound(data, components, prior);
    }

    result.mixture = collapse(components);
    return result;
}

}  // namespace vbbg
