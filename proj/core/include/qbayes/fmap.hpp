#pragma once

#include <functional>
#include <string>

#include "qbayes/errors.hpp"

namespace qbayes {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

enum class FMapKind { location, scale, weight, fisher, custom };

/// Strictly increasing map f encoding a parameter's symmetry: f(theta') =
/// f(theta) + c realizes translation invariance of complete ignorance.
struct FMap {
    FMapKind kind = FMapKind::custom;
    Interval domain{};
    std::function<double(double)> forward;
    std::function<double(double)> inverse;
    std::function<double(double)> derivative;
};

/// f(z) = z on the reals.
FMap location_fmap();
/// f(z) = log(z / z0) on (0, inf); z0 > 0.
FMap scale_fmap(double z0);
/// f(z) = 2 artanh(2z - 1) on (0, 1).
FMap weight_fmap();
/// f(z) = integral from `anchor` to z of sqrt(F(t)) dt, F > 0 on `domain`.
/// The inverse uses a cached monotone grid to bracket, then bisection to
/// 1e-12.
FMap fisher_fmap(std::function<double(double)> fisher_information, double anchor,
                 Interval domain);
/// User-supplied triple; validated like the built-in kinds.
FMap custom_fmap(std::function<double(double)> forward,
                 std::function<double(double)> inverse,
                 std::function<double(double)> derivative, Interval domain);

/// Checks monotonicity (derivative > 0) and inverse round trip at 64
/// interior sample points; throws ValidationError on failure.
void validate_fmap(const FMap& f);

/// Odds rescaling theta -> gamma*theta / (1 - theta + gamma*theta) on (0,1).
double mobius(double theta, double gamma);

} // namespace qbayes
