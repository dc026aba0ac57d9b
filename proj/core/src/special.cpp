#include "qbayes/special.hpp"

#include <cmath>
#include <numbers>

#include "qbayes/errors.hpp"

namespace qbayes {

namespace {

constexpr double pi_sq_over_6 = std::numbers::pi * std::numbers::pi / 6.0;

double dilog_series(double z) {
    // Converges geometrically for |z| <= 1/2.
    double term = z;
    double sum = z;
    for (int n = 2; n < 200; ++n) {
        term *= z;
        const double add = term / (static_cast<double>(n) * n);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

} // namespace

double dilog(double z) {
    if (!(z >= 0.0 && z <= 1.0)) {
        throw ValidationError("dilog: argument must lie in [0, 1]");
    }
    if (z == 0.0) return 0.0;
    if (z == 1.0) return pi_sq_over_6;
    if (z <= 0.5) return dilog_series(z);
    return pi_sq_over_6 - std::log(z) * std::log1p(-z) - dilog_series(1.0 - z);
}

} // namespace qbayes
