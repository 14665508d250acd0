#pragma once

namespace vbbg {

/// Digamma function for x > 0, accurate to ~1e-13 relative.
/// Throws InvalidInput for x <= 0 or non-finite x.
double digamma(double x);

}  // namespace vbbg
