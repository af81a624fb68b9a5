#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "ctev/geometry.hpp"
#include "ctev/herglotz.hpp"
#include "ctev/special_fn.hpp"
#include "ctev/util.hpp"

namespace ctev {

/// Standard mollifier bump exp(-1/(1 - t^2)) scaled to (x3c - L, x3c + L),
/// flat-zero to all orders at the endpoints.
struct BumpFunction {
    double x3c = 0;
    double L = 0;
    double amplitude = 1;

    BumpFunction(double center, double half_width, double amp = 1.0)
        : x3c(center), L(half_width), amplitude(amp) {
        if (!(L > 0)) throw std::invalid_argument("BumpFunction: half_width > 0");
        if (!(amp > 0)) throw std::invalid_argument("BumpFunction: amplitude > 0");
    }

    double operator()(double x3) const {
        const double t = (x3 - x3c) / L;
        if (std::abs(t) >= 1) return 0;
        return amplitude * std::exp(-1.0 / (1 - t * t));
    }

    double sup() const { return amplitude * std::exp(-1.0); }
};

namespace detail {

/// Composite Gauss rule over the bump support with panel breakpoints
/// clustered toward the endpoints, where all derivatives of psi vanish.
inline void bump_rule(const BumpFunction& psi, int order, std::vector<double>& nodes,
                      std::vector<double>& weights) {
    nodes.clear();
    weights.clear();
    const int panels = 10;
    std::vector<double> pn, pw;
    for (int p = 0; p < panels; ++p) {
        const double ua = -std::cos(pi * p / panels);
        const double ub = -std::cos(pi * (p + 1) / panels);
        gauss_legendre_ab(order, psi.x3c + psi.L * ua, psi.x3c + psi.L * ub, pn, pw);
        nodes.insert(nodes.end(), pn.begin(), pn.end());
        weights.insert(weights.end(), pw.begin(), pw.end());
    }
}

template <class G>
Complex reduce_at_order(G&& g, const BumpFunction& psi, const Vector2d& xp, int order) {
    std::vector<double> n, w;
    bump_rule(psi, order, n, w);
    Complex acc = 0;
    for (std::size_t i = 0; i < n.size(); ++i) acc += w[i] * psi(n[i]) * g(xp, n[i]);
    return acc;
}

}  // namespace detail

/// R(g)(x') = int psi(x3) g(x', x3) dx3, with a refinement check on the
/// quadrature.
template <class G>
Complex reduce_at(G&& g, const BumpFunction& psi, const Vector2d& xp, int order = 12) {
    const Complex coarse = detail::reduce_at_order(g, psi, xp, order);
    const Complex fine = detail::reduce_at_order(g, psi, xp, order + 6);
    if (std::abs(fine - coarse) > 1e-8 * std::max(1.0, std::abs(fine)))
        throw NonConvergence("reduce_at: quadrature did not converge");
    return fine;
}

/// Curried form: the reduced function of x'.
template <class G>
auto reduce(G g, const BumpFunction& psi, int order = 12) {
    return [g, psi, order](const Vector2d& xp) { return reduce_at(g, psi, xp, order); };
}

/// C(psi) = int psi.
inline double bump_integral(const BumpFunction& psi, int order = 12) {
    std::vector<double> n, w;
    detail::bump_rule(psi, order, n, w);
    double acc = 0;
    for (std::size_t i = 0; i < n.size(); ++i) acc += w[i] * psi(n[i]);
    return acc;
}

/// C1(psi)(x') = int psi(|x'| tan(w)) sec^3(w) dw over |w| <= arctan(L/|x'|),
/// evaluated in the coordinate centered at the bump; satisfies
/// C1 |x'|^2 = int psi(t) sqrt(|x'|^2 + t^2) dt.
inline double c1_constant(const BumpFunction& psi, double x_prime_norm, int order = 12) {
    if (!(x_prime_norm > 0)) throw std::invalid_argument("c1_constant: |x'| > 0 required");
    const double A = std::atan(psi.L / x_prime_norm);
    const int panels = 10;
    double acc = 0;
    std::vector<double> n, w;
    for (int p = 0; p < panels; ++p) {
        const double ua = -A * std::cos(pi * p / panels);
        const double ub = -A * std::cos(pi * (p + 1) / panels);
        gauss_legendre_ab(order, ua, ub, n, w);
        for (std::size_t i = 0; i < n.size(); ++i) {
            const double sec = 1.0 / std::cos(n[i]);
            acc += w[i] * psi(psi.x3c + x_prime_norm * std::tan(n[i])) * sec * sec * sec;
        }
    }
    return acc;
}

struct BesselBracket {
    int l = 0;
    double x_prime = 0;
    double lower = 0, value = 0, upper = 0;
    bool pass = false;
};

/// R(j_l(k|.|)) with the mean-value points swept over the extremes {0, L}:
/// under k^2(|x'|^2 + L^2) < 1 both factors of the closed form are monotone
/// in the squared point, so the extremes bracket the value.
inline BesselBracket reduced_bessel_bracket(int l, double k, const BumpFunction& psi,
                                            const Vector2d& xp, int order = 12) {
    if (!(k * psi.L < 1))
        throw std::invalid_argument("reduced_bessel_bracket: kL < 1 required");
    const double rho = xp.norm();
    if (!(k * k * (rho * rho + psi.L * psi.L) < 1))
        throw std::invalid_argument("reduced_bessel_bracket: k^2(|x'|^2 + L^2) < 1 required");
    if (l >= 1 && !(rho > 0))
        throw std::invalid_argument("reduced_bessel_bracket: |x'| > 0 for l >= 1");

    BesselBracket b;
    b.l = l;
    b.x_prime = rho;
    b.value = reduce_at(
                  [l, k, rho](const Vector2d&, double t) {
                      return Complex(spherical_j(l, k * std::hypot(rho, t)), 0);
                  },
                  psi, xp, order)
                  .real();

    if (l == 0) {
        // R(j_0) = C(psi) j_0(k sqrt(|x'|^2 + a^2)), monotone in a^2
        const double c = bump_integral(psi, order);
        const double f0 = c * spherical_j(0, k * rho);
        const double fL = c * spherical_j(0, k * std::hypot(rho, psi.L));
        b.lower = std::min(f0, fL);
        b.upper = std::max(f0, fL);
    } else {
        // per-point factor at mean-value squares a1^2 (radial power) and a2^2
        // (normalized series); the series factor is (2l+1)!! j_l(t)/t^l
        auto factor = [&](double a1, double a2) {
            const double t = k * std::hypot(rho, a2);
            const double series = double_factorial(2 * l + 1) * spherical_j(l, t) /
                                  std::pow(t, double(l));
            return std::pow(k, double(l)) *
                   std::pow(rho * rho + a1 * a1, (l - 1) / 2.0) /
                   double_factorial(2 * l + 1) * series;
        };
        double lo = 1e300, hi = -1e300;
        for (double a1 : {0.0, psi.L}) {
            for (double a2 : {0.0, psi.L}) {
                const double f = factor(a1, a2);
                lo = std::min(lo, f);
                hi = std::max(hi, f);
            }
        }
        const double c1r2 = c1_constant(psi, rho, order) * rho * rho;
        b.lower = c1r2 * lo;
        b.upper = c1r2 * hi;
    }
    const double tol = 1e-10 * std::max(1.0, std::abs(b.value));
    b.pass = b.lower - tol <= b.value && b.value <= b.upper + tol;
    return b;
}

struct ReductionConstants {
    double C_psi = 0;
    double C1_psi = 0;
    double c1_upper = 0;  // sqrt(2) pi sup|psi|, valid for |x'| > L
    double C2_lower = 0, C2_upper = 0;
    double corner_combination_min = 0;  // min |C2- mu(thm)^-2 + C2+ mu(thM)^-2|
    bool c1_in_range = false;
    bool corner_nonzero = false;
};

/// C(psi), C1(psi)(x'), the C2 bracket C(psi)(1-2(kL)^2)/(1-(kL)^2) <= C2 <=
/// C(psi)/(1-(kL)^2), and the minimum modulus of the corner combination over
/// the bracket box (attained at the lower corner since both weights are
/// positive): nonzero exactly when the opening differs from pi.
inline ReductionConstants reduction_constants(const BumpFunction& psi, double k,
                                              double x_prime_norm, const Sector& sec,
                                              int order = 12) {
    const double kL = k * psi.L;
    if (!(kL < 1)) throw std::invalid_argument("reduction_constants: kL < 1 required");
    ReductionConstants rc;
    rc.C_psi = bump_integral(psi, order);
    rc.C1_psi = c1_constant(psi, x_prime_norm, order);
    rc.c1_upper = std::sqrt(2.0) * pi * psi.sup();
    rc.c1_in_range = 0 < rc.C1_psi && rc.C1_psi < rc.c1_upper;
    rc.C2_lower = rc.C_psi * (1 - 2 * kL * kL) / (1 - kL * kL);
    rc.C2_upper = rc.C_psi / (1 - kL * kL);
    rc.corner_combination_min =
        rc.C2_lower * 2 * std::abs(std::cos(sec.opening() / 2));
    rc.corner_nonzero = rc.C2_lower > 0 && std::abs(sec.opening() - pi) > 1e-12;
    return rc;
}

struct GammaMomentReport {
    std::vector<int> l;
    std::vector<double> gamma_abs;
    std::vector<double> sharp_bound;  // sqrt(4 pi / (2l+1)) ||g||
    double bound = 0;                 // 2 sqrt(pi) ||g||
    bool all_pass = false;
};

/// |gamma_l| = |int g P_l(xhat . d)| <= sqrt(4 pi/(2l+1)) ||g|| <= 2 sqrt(pi)
/// ||g|| for every l up to l_max.
inline GammaMomentReport gamma_moment_bound(const Density& g, int l_max,
                                            const Vector3d& axis = Vector3d(0, 0, 1)) {
    if (g.dimension != 3)
        throw std::invalid_argument("gamma_moment_bound: 3D density required");
    if (l_max < 0) throw std::invalid_argument("gamma_moment_bound: l_max >= 0");
    GammaMomentReport rep;
    const double norm = g.l2_norm();
    rep.bound = 2 * std::sqrt(pi) * norm;
    rep.all_pass = true;
    for (int l = 0; l <= l_max; ++l) {
        rep.l.push_back(l);
        rep.gamma_abs.push_back(std::abs(legendre_moment(g, l, axis)));
        rep.sharp_bound.push_back(std::sqrt(4 * pi / (2 * l + 1.0)) * norm);
        if (rep.gamma_abs.back() > rep.bound + 1e-12 * rep.bound) rep.all_pass = false;
    }
    return rep;
}

inline void write_bracket_csv(std::ostream& os, std::span<const BesselBracket> rows) {
    os << "l,x_prime,lower,value,upper,pass\n";
    char buf[160];
    for (const auto& b : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d\n", b.l, b.x_prime,
                      b.lower, b.value, b.upper, int(b.pass));
        os << buf;
    }
}

}  // namespace ctev
