#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctev {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Ordinary least squares fit y = a + b*x; returns {intercept, slope}.
inline std::pair<double, double> linear_fit(std::span<const double> x,
                                            std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    return {intercept, slope};
}

/// Slope of log(y) against log(x), skipping pairs with y below `floor`.
inline double loglog_slope(std::span<const double> x, std::span<const double> y,
                           double floor = 0.0) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] > floor && x[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    return linear_fit(lx, ly).second;
}

inline double geometric_mean(std::span<const double> v) {
    double acc = 0;
    for (double x : v) acc += std::log(std::max(x, 1e-300));
    return std::exp(acc / static_cast<double>(v.size()));
}

/// Trend-to-zero test: last third geometric mean at most half of the first
/// third, and a negative fitted log-slope over the index.
inline bool trends_to_zero(std::span<const double> seq) {
    if (seq.size() < 3) return false;
    const std::size_t third = seq.size() / 3;
    const double head = geometric_mean(seq.subspan(0, third));
    const double tail = geometric_mean(seq.subspan(seq.size() - third, third));
    std::vector<double> idx(seq.size());
    std::iota(idx.begin(), idx.end(), 1.0);
    const double slope = loglog_slope(idx, seq);
    return tail <= 0.5 * head && slope < 0;
}

/// FNV-1a, used for config hashes in output metadata.
inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace ctev
