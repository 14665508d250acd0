#include "vbbg/digamma.hpp"

#include <cmath>
#include <string>

#include "vbbg/error.hpp"

namespace vbbg {

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw InvalidInput("digamma: argument must be positive and finite, got " + std::to_string(x));
    }
    // Shift into the asymptotic regime with psi(x) = psi(x + 1) - 1/x.
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli tail through x^-14; the next term is below 5e-17 at x = 10.
    const double tail =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 -
                                        inv2 * (1.0 / 132.0 -
                                                inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    return shift + std::log(x) - 0.5 * inv - tail;
}

}  // namespace vbbg
