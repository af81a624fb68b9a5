#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "ctev/geometry.hpp"
#include "ctev/special_fn.hpp"
#include "ctev/util.hpp"

namespace ctev {

/// omega(theta) = -cos(theta/2 + pi) = cos(theta/2), the CGO decay rate along
/// the ray at angle theta.
inline double cgo_omega(double theta) { return std::cos(theta / 2); }

/// mu(theta) = -cos(theta/2+pi) - i sin(theta/2+pi) = e^{i theta/2};
/// u0(s x) = exp(-sqrt(s r) mu(theta)).
inline Complex cgo_mu(double theta) {
    return {std::cos(theta / 2), std::sin(theta / 2)};
}

struct CgoScale {
    double s;
    explicit CgoScale(double scale) : s(scale) {
        if (!(s > 0)) throw std::invalid_argument("CgoScale: s > 0 required");
    }
};

struct BranchCutError : std::domain_error {
    using std::domain_error::domain_error;
};

/// u0(s x). Points within 1e-14 of the branch cut {x1 <= 0, x2 = 0} are
/// rejected rather than rounded; the origin itself maps to 1.
inline Complex u0_eval(const Vector2d& x, CgoScale scale) {
    const double r = x.norm();
    if (r == 0) return {1.0, 0.0};
    if (x.x() <= 0 && std::abs(x.y()) < 1e-14 * std::max(1.0, -x.x()))
        throw BranchCutError("u0_eval: point on the branch cut x1 <= 0, x2 = 0");
    const double theta = std::atan2(x.y(), x.x());
    return std::exp(-std::sqrt(scale.s * r) * cgo_mu(theta));
}

/// Gradient of x -> u0(s x) in Cartesian coordinates (analytic).
inline Eigen::Vector2cd u0_grad(const Vector2d& x, CgoScale scale) {
    const double r = x.norm();
    if (r == 0) throw BranchCutError("u0_grad: gradient singular at the origin");
    if (x.x() <= 0 && std::abs(x.y()) < 1e-14 * std::max(1.0, -x.x()))
        throw BranchCutError("u0_grad: point on the branch cut");
    const double theta = std::atan2(x.y(), x.x());
    const Complex u = std::exp(-std::sqrt(scale.s * r) * cgo_mu(theta));
    // d/dr = -sqrt(s/(4r)) mu u ; d/dtheta = -sqrt(s r) (i/2) mu u
    const Complex dr = -std::sqrt(scale.s / (4 * r)) * cgo_mu(theta) * u;
    const Complex dth = -std::sqrt(scale.s * r) * Complex(0, 0.5) * cgo_mu(theta) * u;
    const double c = std::cos(theta), s_ = std::sin(theta);
    return {c * dr - s_ / r * dth, s_ * dr + c / r * dth};
}

/// Closed form of the full-sector integral: 6i (e^{-2 i theta_M} - e^{-2 i
/// theta_m}) s^{-2}. Holds for any valid sector, including empty openings.
inline Complex sector_integral_closed(const Sector& sec, CgoScale scale) {
    const Complex i(0, 1);
    return 6.0 * i *
           (std::exp(-2.0 * i * sec.theta_M) - std::exp(-2.0 * i * sec.theta_m)) /
           (scale.s * scale.s);
}

/// Radial truncation for full-sector quadrature: exp(-delta sqrt(s R)) < 1e-16.
inline double cgo_truncation_radius(const Sector& sec, CgoScale scale) {
    const double d = delta_w(sec);
    const double t = 36.9 / d;  // -log(1e-16) ~ 36.84
    return t * t / scale.s;
}

/// Quadrature of int_W u0(s x) dx over the truncated cone [0, R(s)] x
/// [theta_m, theta_M]; oracle counterpart of sector_integral_closed.
inline Complex sector_integral_quadrature(const Sector& sec, CgoScale scale,
                                          int order = 16, int panels = 40) {
    const double R = cgo_truncation_radius(sec, scale);
    std::vector<double> rn, rw, tn, tw;
    graded_radial_rule(R, order, rn, rw, panels);
    gauss_legendre_ab(4 * order, sec.theta_m, sec.theta_M, tn, tw);
    Complex acc = 0;
    for (std::size_t j = 0; j < tn.size(); ++j) {
        const Complex mu = cgo_mu(tn[j]);
        Complex radial = 0;
        for (std::size_t i = 0; i < rn.size(); ++i)
            radial += rn[i] * std::exp(-std::sqrt(scale.s * rn[i]) * mu) * rw[i];
        acc += radial * tw[j];
    }
    return acc;
}

struct BoundCheck {
    std::string quantity;
    double value = 0;   // quadrature result
    double bound = 0;   // closed-form right-hand side
    bool pass = false;  // value <= bound
};

/// Verification record for the CGO L2 estimates. The first five entries are
/// the corner-norm inequalities; the weighted full-plane estimate and the
/// exterior tail estimate follow as extra rows (the tail one is asymptotic in
/// s and its flag may legitimately be false at small s h).
struct CgoBoundsReport {
    double s = 0, h = 0, alpha = 0;
    std::vector<BoundCheck> checks;

    const BoundCheck& find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.quantity == name) return c;
        throw std::invalid_argument("CgoBoundsReport: no such quantity " + name);
    }

    bool all_core_pass() const {
        for (const auto& c : checks)
            if (c.quantity != "tail_l1" && !c.pass) return false;
        return true;
    }
};

/// Evaluates the five corner L2 bounds (mean-value point Theta taken as 0,
/// the supremum of the bound), the weighted full-sector bound with
/// Gamma(2 alpha + 4), and the exterior tail bound, against graded-quadrature
/// values of the matching integrals.
inline CgoBoundsReport cgo_bounds(const TruncatedSector& ts, CgoScale scale,
                                  double alpha, int order = 12) {
    if (alpha < 0) throw std::invalid_argument("cgo_bounds: alpha >= 0 required");
    const Sector& sec = ts.sector;
    const double d = delta_w(sec);
    const double dth = sec.opening();
    const double s = scale.s, h = ts.h;

    CgoBoundsReport rep;
    rep.s = s;
    rep.h = h;
    rep.alpha = alpha;

    const auto area = build_quadrature(ts, Region::sector_area, order);
    const auto arc = build_quadrature(ts, Region::arc, 4 * order);

    auto abs_u0_sq = [&](const Vector2d& x) {
        const double r = x.norm();
        const double th = std::atan2(x.y(), x.x());
        return std::exp(-2 * std::sqrt(s * r) * cgo_omega(th));
    };

    // ||u0||^2_{L2(S_h)} <= (thM - thm) h^2 / 2 at Theta = 0
    rep.checks.push_back({"l2_area_sq", area.integrate(abs_u0_sq), dth * h * h / 2});

    // ||u0||_{L2(Lambda_h)} <= sqrt(h) e^{-d sqrt(sh)} sqrt(thM - thm)
    const double arc_l2 = std::sqrt(arc.integrate(abs_u0_sq));
    rep.checks.push_back(
        {"l2_arc", arc_l2, std::sqrt(h) * std::exp(-d * std::sqrt(s * h)) * std::sqrt(dth)});

    // ||d_nu u0||_{L2(Lambda_h)} <= (1/2) sqrt(s) e^{-d sqrt(sh)} sqrt(thM-thm)
    const double nrm_l2 = std::sqrt(arc.integrate([&](const Vector2d& x) {
        return s / (4 * h) * abs_u0_sq(x);
    }));
    rep.checks.push_back(
        {"normal_deriv_arc", nrm_l2,
         0.5 * std::sqrt(s) * std::exp(-d * std::sqrt(s * h)) * std::sqrt(dth)});

    // ||d_theta u0||_{L2(Lambda_h)} <= (sqrt(s)/2) h e^{-d sqrt(sh)} sqrt(thM-thm)
    // (the pointwise estimate |d_theta u0| <= sqrt(sh)/2 e^{-d sqrt(sh)}
    // integrated over the arc gives the h scaling)
    const double tan_l2 = std::sqrt(arc.integrate([&](const Vector2d& x) {
        return s * h / 4 * abs_u0_sq(x);
    }));
    rep.checks.push_back(
        {"tangential_deriv_arc", tan_l2,
         0.5 * std::sqrt(s) * h * std::exp(-d * std::sqrt(s * h)) * std::sqrt(dth)});

    // || |x|^a u0 ||^2_{L2(S_h)} <= s^{-(2a+2)} 2(thM-thm)/(4 d^2)^{2a+2} G(4a+4)
    const double w_l2 = area.integrate(
        [&](const Vector2d& x) { return std::pow(x.norm(), 2 * alpha) * abs_u0_sq(x); });
    rep.checks.push_back({"weighted_l2_sq", w_l2,
                          std::pow(s, -(2 * alpha + 2)) * 2 * dth /
                              std::pow(4 * d * d, 2 * alpha + 2) *
                              std::tgamma(4 * alpha + 4)});

    // int_W |u0| |x|^a dx <= 2 (thM-thm) G(2a+4) / d^{2a+4} s^{-a-2}
    const double R = std::max(cgo_truncation_radius(sec, scale), h);
    std::vector<double> rn, rw, tn, tw;
    graded_radial_rule(R, order, rn, rw, 40);
    gauss_legendre_ab(4 * order, sec.theta_m, sec.theta_M, tn, tw);
    double full = 0, tail = 0;
    for (std::size_t j = 0; j < tn.size(); ++j) {
        const double om = cgo_omega(tn[j]);
        for (std::size_t i = 0; i < rn.size(); ++i) {
            const double f =
                rn[i] * std::exp(-std::sqrt(s * rn[i]) * om) * rw[i] * tw[j];
            full += f * std::pow(rn[i], alpha);
            if (rn[i] > h) tail += f;
        }
    }
    rep.checks.push_back({"weighted_full_l1", full,
                          2 * dth * std::tgamma(2 * alpha + 4) /
                              std::pow(d, 2 * alpha + 4) * std::pow(s, -alpha - 2)});

    // int_{W \ B_h} |u0| dx <= 6 (thM-thm)/d^4 s^{-2} e^{-d sqrt(h s)/2}
    rep.checks.push_back({"tail_l1", tail,
                          6 * dth / std::pow(d, 4) / (s * s) *
                              std::exp(-d * std::sqrt(h * s) / 2)});

    for (auto& c : rep.checks) c.pass = c.value <= c.bound;
    return rep;
}

/// CSV export: one row per (report, quantity).
inline void write_cgo_csv(std::ostream& os, std::span<const CgoBoundsReport> reports) {
    os << "s,h,alpha,quantity,bound,value,pass\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : reports)
        for (const auto& c : r.checks)
            os << num(r.s) << ',' << num(r.h) << ',' << num(r.alpha) << ','
               << c.quantity << ',' << num(c.bound) << ',' << num(c.value) << ','
               << (c.pass ? "true" : "false") << '\n';
}

}  // namespace ctev
