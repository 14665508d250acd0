#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vbbg/mixture.hpp"
#include "vbbg/vb_fit.hpp"

namespace vbbg {

struct ToyStage {
    std::size_t new_samples = 0;
    PointMixture mixture;
};

/// Fit on 50 draws of N(16, 1.5^2) and 50 of N(50, 2^2), then stream two
/// batches of 25 draws of N(21, 1) through online adaptation.
struct ToyReport {
    std::vector<double> training;  // first 50 from the low mode, then 50 from the high mode
    FitResult fit;
    std::vector<ToyStage> stages;  // after 0, 25 and 50 streamed samples
};

ToyReport toy_experiment(std::uint64_t seed);

/// Columns stage,new_samples,component,weight,mean,stddev.
void write_toy_csv(std::ostream& out, const ToyReport& report);

}  // namespace vbbg
