#include "vbbg/toy.hpp"

#include <cstdio>
#include <ostream>
#include <random>

#include "vbbg/online.hpp"
#include "vbbg/pipeline.hpp"

namespace vbbg {

ToyReport toy_experiment(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> cold(16.0, 1.5);
    std::normal_distribution<double> hot(50.0, 2.0);
    std::normal_distribution<double> novel(21.0, 1.0);

    std::vector<double> data;
    data.reserve(100);
    for (int i = 0; i < 50; ++i) data.push_back(cold(rng));
    for (int i = 0; i < 50; ++i) data.push_back(hot(rng));

    ToyReport report;
    FitConfig cfg;
    cfg.seed = pixel_seed(seed, 0);
    report.fit = fit(data, default_max_components(data.size()), cfg);

    PixelModel model(data.size(), 2.5);
    model.mixture = report.fit.mixture;
    for (double x : data) model.history.push_back(x);
    report.training = data;
    report.stages.push_back({0, model.mixture});

    std::size_t streamed = 0;
    for (int batch = 0; batch < 2; ++batch) {
        for (int i = 0; i < 25; ++i) {
            adapt(model, novel(rng));
            ++streamed;
        }
        report.stages.push_back({streamed, model.mixture});
    }
    return report;
}

void write_toy_csv(std::ostream& out, const ToyReport& report) {
    out << "stage,new_samples,component,weight,mean,stddev\n";
    char buf[160];
    for (std::size_t s = 0; s < report.stages.size(); ++s) {
        const auto& stage = report.stages[s];
        for (std::size_t k = 0; k < stage.mixture.size(); ++k) {
            const auto& c = stage.mixture.components[k];
            std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.9f,%.9f,%.9f\n", s, stage.new_samples, k, c.weight, c.mean,
                          c.stddev());
            out << buf;
        }
    }
}

}  // namespace vbbg
