#include "qbayes/fmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

namespace qbayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double adaptive_simpson(const std::function<double(double)>& g, double lo, double hi,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double mid = (lo + hi) / 2.0;
    const double lm = (lo + mid) / 2.0, rm = (mid + hi) / 2.0;
    const double flm = g(lm), frm = g(rm);
    const double left = (mid - lo) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (hi - mid) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(g, lo, mid, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(g, mid, hi, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& g, double lo, double hi,
                          double tol) {
    if (lo == hi) return 0.0;
    const double sgn = lo < hi ? 1.0 : -1.0;
    if (sgn < 0.0) std::swap(lo, hi);
    const double fa = g(lo), fb = g(hi), fm = g((lo + hi) / 2.0);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return sgn * adaptive_simpson(g, lo, hi, fa, fm, fb, whole, tol, 48);
}

// Interior sampling grid avoiding infinite endpoints.
std::vector<double> sample_points(const Interval& domain, int count) {
    double lo = domain.lo, hi = domain.hi;
    if (std::isinf(lo)) lo = std::isinf(hi) ? -8.0 : hi - 16.0;
    if (std::isinf(hi)) hi = lo + 16.0;
    const double pad = (hi - lo) / (count + 1);
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) pts.push_back(lo + pad * i);
    return pts;
}

} // namespace

void validate_fmap(const FMap& f) {
    if (!f.forward || !f.inverse || !f.derivative) {
        throw ValidationError("FMap: forward, inverse, and derivative are all required");
    }
    for (double z : sample_points(f.domain, 64)) {
        if (!(f.derivative(z) > 0.0)) {
            std::ostringstream msg;
            msg << "FMap: derivative not positive at " << z;
            throw ValidationError(msg.str());
        }
        const double back = f.inverse(f.forward(z));
        if (std::abs(back - z) > 1e-10 * std::max(1.0, std::abs(z))) {
            std::ostringstream msg;
            msg << "FMap: inverse(forward(" << z << ")) = " << back << " round-trip failed";
            throw ValidationError(msg.str());
        }
    }
}

FMap location_fmap() {
    FMap f;
    f.kind = FMapKind::location;
    f.domain = {-kInf, kInf};
    f.forward = [](double z) { return z; };
    f.inverse = [](double s) { return s; };
    f.derivative = [](double) { return 1.0; };
    return f;
}

FMap scale_fmap(double z0) {
    if (!(z0 > 0.0)) throw ValidationError("scale_fmap: z0 must be positive");
    FMap f;
    f.kind = FMapKind::scale;
    f.domain = {0.0, kInf};
    f.forward = [z0](double z) { return std::log(z / z0); };
    f.inverse = [z0](double s) { return z0 * std::exp(s); };
    f.derivative = [](double z) { return 1.0 / z; };
    return f;
}

FMap weight_fmap() {
    FMap f;
    f.kind = FMapKind::weight;
    f.domain = {0.0, 1.0};
    f.forward = [](double z) { return 2.0 * std::atanh(2.0 * z - 1.0); };
    // f^{-1}(s) = (1 + tanh(s/2)) / 2, the logistic function.
    f.inverse = [](double s) { return 0.5 * (1.0 + std::tanh(s / 2.0)); };
    f.derivative = [](double z) { return 1.0 / (z * (1.0 - z)); };
    return f;
}

FMap fisher_fmap(std::function<double(double)> fisher_information, double anchor,
                 Interval domain) {
    if (!fisher_information) throw ValidationError("fisher_fmap: F is required");
    if (!(domain.lo < domain.hi) || std::isinf(domain.lo) || std::isinf(domain.hi)) {
        throw ValidationError("fisher_fmap: domain must be a finite interval");
    }
    if (anchor < domain.lo || anchor > domain.hi) {
        throw ValidationError("fisher_fmap: anchor must lie in the domain");
    }
    auto sqrt_fisher = [F = std::move(fisher_information)](double t) {
        const double v = F(t);
        if (!(v > 0.0)) {
            std::ostringstream msg;
            msg << "fisher_fmap: F(" << t << ") = " << v << " is not positive";
            throw ValidationError(msg.str());
        }
        return std::sqrt(v);
    };

    auto forward = [sqrt_fisher, anchor](double z) {
        return integrate_adaptive(sqrt_fisher, anchor, z, 1e-13);
    };

    // Monotone grid caching f over the domain; brackets the inverse, which
    // is then polished by bisection on the true forward map.
    struct InverseCache {
        std::vector<double> z, s;
    };
    auto cache = std::make_shared<InverseCache>();
    const int grid_n = 257;
    for (int i = 0; i < grid_n; ++i) {
        const double z = domain.lo + (domain.hi - domain.lo) * i / (grid_n - 1);
        cache->z.push_back(z);
        cache->s.push_back(forward(z));
    }

    auto inverse = [cache, forward, domain](double s) {
        if (s < cache->s.front() || s > cache->s.back()) {
            std::ostringstream msg;
            msg << "fisher_fmap: value " << s << " outside the map's range";
            throw ValidationError(msg.str());
        }
        const auto it = std::lower_bound(cache->s.begin(), cache->s.end(), s);
        std::size_t hi_idx = static_cast<std::size_t>(it - cache->s.begin());
        if (hi_idx == 0) hi_idx = 1;
        double lo = cache->z[hi_idx - 1], hi = cache->z[hi_idx];
        // Monotonicity guarantees the bracket; plain bisection is safe.
        for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++iter) {
            const double mid = (lo + hi) / 2.0;
            (forward(mid) < s ? lo : hi) = mid;
        }
        return (lo + hi) / 2.0;
    };

    FMap f;
    f.kind = FMapKind::fisher;
    f.domain = domain;
    f.forward = forward;
    f.inverse = inverse;
    f.derivative = sqrt_fisher;
    validate_fmap(f);
    return f;
}

FMap custom_fmap(std::function<double(double)> forward, std::function<double(double)> inverse,
                 std::function<double(double)> derivative, Interval domain) {
    FMap f;
    f.kind = FMapKind::custom;
    f.domain = domain;
    f.forward = std::move(forward);
    f.inverse = std::move(inverse);
    f.derivative = std::move(derivative);
    validate_fmap(f);
    return f;
}

double mobius(double theta, double gamma) {
    if (!(gamma > 0.0)) throw ValidationError("mobius: gamma must be positive");
    if (!(theta > 0.0 && theta < 1.0)) {
        throw ValidationError("mobius: theta must lie in (0, 1)");
    }
    return gamma * theta / (1.0 - theta + gamma * theta);
}

} // namespace qbayes
