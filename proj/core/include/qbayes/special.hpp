#pragma once

namespace qbayes {

/// Dilogarithm Li_2(z) on [0, 1], absolute error <= 1e-12. Uses the series
/// directly for z <= 1/2 and the reflection identity
/// Li_2(z) + Li_2(1-z) = pi^2/6 - ln(z) ln(1-z) above it.
double dilog(double z);

} // namespace qbayes
