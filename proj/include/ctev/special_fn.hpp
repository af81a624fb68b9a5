#pragma once

#include <cmath>
#include <stdexcept>

#include "ctev/geometry.hpp"
#include "ctev/util.hpp"

namespace ctev {

/// Truncation policy for the ascending Bessel / spherical-Bessel series.
struct SeriesTruncation {
    int max_terms = 200;
    double tail_tolerance = 1e-14;

    SeriesTruncation() = default;
    SeriesTruncation(int m, double tol) : max_terms(m), tail_tolerance(tol) {
        if (max_terms < 1 || !(tail_tolerance > 0))
            throw std::invalid_argument("SeriesTruncation: max_terms >= 1, tol > 0");
    }
};

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

/// (2l+1)!! etc.; n = -1 and n = 0 give 1.
inline double double_factorial(int n) {
    double acc = 1;
    for (int k = n; k > 1; k -= 2) acc *= k;
    return acc;
}

namespace detail {

/// Integral representation (1/pi) int_0^pi cos(p tau - t sin tau) dtau,
/// composite Gauss with panel count scaled to the oscillation budget.
inline double bessel_j_integral(int p, double t) {
    const int panels = 8 + static_cast<int>((std::abs(t) + p) / 2);
    std::vector<double> n, w;
    double acc = 0;
    for (int q = 0; q < panels; ++q) {
        gauss_legendre_ab(12, pi * q / panels, pi * (q + 1) / panels, n, w);
        for (std::size_t i = 0; i < n.size(); ++i)
            acc += std::cos(p * n[i] - t * std::sin(n[i])) * w[i];
    }
    return acc / pi;
}

}  // namespace detail

/// J_p(t) by the ascending series t^p/(2^p p!) (1 + sum_l (-1)^l t^{2l} /
/// (4^l l! (p+1)...(p+l))); falls back to the integral representation for
/// t > 12 where alternating-series cancellation costs more than 4 digits.
inline double bessel_j(int p, double t, const SeriesTruncation& trunc = {}) {
    if (p < 0) throw std::invalid_argument("bessel_j: p >= 0 required");
    if (!(t >= 0)) throw std::invalid_argument("bessel_j: t >= 0 required");
    if (t > 12) return detail::bessel_j_integral(p, t);
    if (t == 0) return p == 0 ? 1.0 : 0.0;

    double prefactor = 1;
    for (int i = 1; i <= p; ++i) prefactor *= t / (2.0 * i);
    double term = 1, sum = 1;
    for (int l = 1; l <= trunc.max_terms; ++l) {
        term *= -t * t / (4.0 * l * (p + l));
        sum += term;
        if (std::abs(term) < trunc.tail_tolerance * std::abs(sum)) return prefactor * sum;
    }
    throw NonConvergence("bessel_j: series did not converge within max_terms");
}

inline double bessel_j_prime(int p, double t, const SeriesTruncation& trunc = {}) {
    if (p == 0) return -bessel_j(1, t, trunc);
    if (t == 0) return p == 1 ? 0.5 : 0.0;
    return 0.5 * (bessel_j(p - 1, t, trunc) - bessel_j(p + 1, t, trunc));
}

/// j_l(t) = t^l/(2l+1)!! (1 + sum_m (-1)^m t^{2m} / (2^m m! N_{l,m})) with
/// N_{l,m} = (2l+3)(2l+5)...(2l+2m+1).
inline double spherical_j(int l, double t, const SeriesTruncation& trunc = {}) {
    if (l < 0) throw std::invalid_argument("spherical_j: l >= 0 required");
    if (!(t >= 0)) throw std::invalid_argument("spherical_j: t >= 0 required");
    if (t > 12 && t > l) {
        // upward recurrence is stable for t > l; closed trig forms seed it
        double jm1 = std::cos(t) / t;  // j_{-1}
        double j0 = std::sin(t) / t;
        if (l == 0) return j0;
        double prev = jm1, cur = j0;
        for (int q = 0; q < l; ++q) {
            double next = (2 * q + 1) / t * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    if (t == 0) return l == 0 ? 1.0 : 0.0;

    double prefactor = 1;
    for (int i = 1; i <= l; ++i) prefactor *= t / (2.0 * i + 1.0);
    double term = 1, sum = 1;
    for (int m = 1; m <= trunc.max_terms; ++m) {
        term *= -t * t / (2.0 * m * (2.0 * l + 2.0 * m + 1.0));
        sum += term;
        if (std::abs(term) < trunc.tail_tolerance * std::abs(sum)) return prefactor * sum;
    }
    throw NonConvergence("spherical_j: series did not converge within max_terms");
}

/// Legendre polynomial by the three-term recurrence.
inline double legendre_p(int l, double x) {
    if (l < 0) throw std::invalid_argument("legendre_p: l >= 0 required");
    if (std::abs(x) > 1 + 1e-12) throw std::invalid_argument("legendre_p: |x| <= 1");
    x = std::clamp(x, -1.0, 1.0);
    double p0 = 1, p1 = x;
    if (l == 0) return p0;
    for (int n = 1; n < l; ++n) {
        double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace ctev
