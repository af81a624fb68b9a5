#pragma once

#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "ctev/cgo.hpp"
#include "ctev/eigensolver.hpp"
#include "ctev/geometry.hpp"
#include "ctev/herglotz.hpp"
#include "ctev/util.hpp"

namespace ctev {

/// Corner asymptotics of the CGO pairing: omega and mu as in the cgo module,
/// plus the combination mu(theta_m)^-2 + mu(theta_M)^-2 = e^{-i theta_m} +
/// e^{-i theta_M} that multiplies the corner value in the limit. It vanishes
/// exactly when the opening is pi.
struct AsymptoticCoeffs {
    Sector sector;

    static double omega(double theta) { return cgo_omega(theta); }
    static Complex mu(double theta) { return cgo_mu(theta); }

    Complex corner_coefficient() const {
        const Complex mm = cgo_mu(sector.theta_m), mM = cgo_mu(sector.theta_M);
        return 1.0 / (mm * mm) + 1.0 / (mM * mM);
    }
};

inline Complex corner_coefficient(const Sector& sec) {
    return AsymptoticCoeffs{sec}.corner_coefficient();
}

/// Closed form of int_0^h e^{-sqrt(s r) mu} dr; exact for any mu with
/// positive real part.
inline Complex ray_exponential_closed(Complex mu, double s, double h) {
    const Complex im2 = 1.0 / (mu * mu);
    const Complex e = std::exp(-std::sqrt(s * h) * mu);
    return 2.0 / s * (im2 - im2 * e - std::sqrt(s * h) / mu * e);
}

/// A (v, w) pair presented through evaluators, either an extracted eigenpair
/// or a synthetic pair, together with the data the integrals need.
struct FieldPair {
    double k = 0;
    Complex q{1, 0};
    std::function<Complex(const Vector2d&)> v, w;
    std::function<Eigen::Vector2cd(const Vector2d&)> grad_v, grad_w;

    static FieldPair from(const Eigenpair& ep) {
        FieldPair fp;
        fp.k = ep.k_star;
        fp.q = ep.medium.q();
        fp.v = [ep](const Vector2d& x) { return ep.v(x); };
        fp.w = [ep](const Vector2d& x) { return ep.w(x); };
        fp.grad_v = [ep](const Vector2d& x) { return ep.grad_v(x); };
        fp.grad_w = [ep](const Vector2d& x) { return ep.grad_w(x); };
        return fp;
    }
};

/// All terms of the Green identity I1 + Delta_j = I3 - I2 - xi_j for one
/// (s, j) cell, each a quadrature value, plus the sub-terms of the I2
/// expansion and the pieces the master limit needs.
struct IdentityTerms {
    double s = 0;
    int j = 0;

    Complex I1, Delta_j, I3;
    Complex I2_minus, I2_plus;    // ray integrals of eta u0 v_j
    Complex xi_minus, xi_plus;    // ray integrals of eta u0 (v - v_j)
    Complex I21_minus, I21_plus;  // v_j(0)-weighted Bessel remainder
    Complex I22_minus, I22_plus;  // higher cylindrical modes of v_j
    Complex I_eta_minus, I_eta_plus;  // Holder remainder of eta

    Complex u0_area;     // int_{S_h} u0
    Complex int_f1j_u0;  // int_{S_h} f1j u0
    Complex int_f2_u0;   // int_{S_h} f2 u0
    Complex f1j_0, f2_0, vj_0;

    /// |I1 + Delta_j - (I3 - I2 - xi_j)|, both rays summed; zero up to
    /// quadrature and solver error.
    double residual() const {
        return std::abs(I1 + Delta_j - I3 + I2_minus + I2_plus + xi_minus + xi_plus);
    }

    double max_term() const {
        double m = 0;
        for (Complex t : {I1, Delta_j, I3, I2_minus, I2_plus, xi_minus, xi_plus})
            m = std::max(m, std::abs(t));
        return m;
    }
};

struct QuadratureDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class VJ>
IdentityTerms identity_terms_at_order(const FieldPair& fp, VJ&& vj, const Medium& med,
                                      const TruncatedSector& ts, CgoScale scale, int j,
                                      int order) {
    IdentityTerms t;
    t.s = scale.s;
    t.j = j;
    const double k = fp.k, s = scale.s;
    const double k2 = k * k;

    t.vj_0 = vj(Vector2d{0, 0});
    t.f1j_0 = -k2 * t.vj_0;
    t.f2_0 = -k2 * med.q() * fp.w(Vector2d{0, 0});

    const auto area = build_quadrature(ts, Region::sector_area, order);
    Complex i1 = 0, dj = 0, ua = 0, if1 = 0, if2 = 0;
    for (std::size_t i = 0; i < area.nodes.size(); ++i) {
        const Vector2d& x = area.nodes[i];
        const double wq = area.weights[i];
        const Complex u = u0_eval(x, scale);
        const Complex f1j = -k2 * vj(x);
        const Complex f2 = -k2 * med.q() * fp.w(x);
        ua += wq * u;
        if1 += wq * u * f1j;
        if2 += wq * u * f2;
        i1 += wq * u * (f1j - f2);
        dj += wq * u * (-k2) * (fp.v(x) - vj(x));
    }
    t.I1 = i1;
    t.Delta_j = dj;
    t.u0_area = ua;
    t.int_f1j_u0 = if1;
    t.int_f2_u0 = if2;

    auto ray_terms = [&](Region reg, double theta, Complex& I2, Complex& xi, Complex& I21,
                         Complex& I22, Complex& Ieta) {
        const auto ray = build_quadrature(ts, reg, order);
        const Complex mu = cgo_mu(theta);
        I2 = xi = I21 = I22 = Ieta = 0;
        for (std::size_t i = 0; i < ray.nodes.size(); ++i) {
            const Vector2d& x = ray.nodes[i];
            const double wq = ray.weights[i];
            const double r = x.norm();
            const Complex u = std::exp(-std::sqrt(s * r) * mu);
            const Complex vjx = vj(x);
            const double eta = med.eta(x);
            I2 += wq * eta * u * vjx;
            xi += wq * eta * u * (fp.v(x) - vjx);
            I21 += wq * (bessel_j(0, k * r) - 1.0) * u;
            I22 += wq * (vjx - t.vj_0 * bessel_j(0, k * r)) * u;
            Ieta += wq * (eta - med.eta(Vector2d{0, 0})) * u * vjx;
        }
    };
    ray_terms(Region::boundary_ray_minus, ts.sector.theta_m, t.I2_minus, t.xi_minus,
              t.I21_minus, t.I22_minus, t.I_eta_minus);
    ray_terms(Region::boundary_ray_plus, ts.sector.theta_M, t.I2_plus, t.xi_plus,
              t.I21_plus, t.I22_plus, t.I_eta_plus);

    const auto arc = build_quadrature(ts, Region::arc, 4 * order);
    Complex i3 = 0;
    for (std::size_t i = 0; i < arc.nodes.size(); ++i) {
        const Vector2d& x = arc.nodes[i];
        const Vector2d nu = x / x.norm();
        const Complex u = u0_eval(x, scale);
        const Complex du = normal_component(u0_grad(x, scale), nu);
        const Complex dvw = normal_component(
            (fp.grad_v(x) - fp.grad_w(x)).eval(), nu);
        i3 += arc.weights[i] * (u * dvw - (fp.v(x) - fp.w(x)) * du);
    }
    t.I3 = i3;
    return t;
}

}  // namespace detail

/// Single-rule assembly at a fixed quadrature order, area for I1/Delta_j,
/// rays for I2/xi/I_eta, arc for I3; no convergence check.
inline IdentityTerms assemble_identity_terms_at(const FieldPair& fp, const Density& gj,
                                                const Medium& med, const TruncatedSector& ts,
                                                CgoScale scale, int j, int order) {
    auto vj = [&gj, &fp](const Vector2d& x) { return herglotz_eval(gj, fp.k, x); };
    return detail::identity_terms_at_order(fp, vj, med, ts, scale, j, order);
}

/// Assembles every term of the Green identity, recomputing at a refined
/// order; rejects the cell when the two assemblies disagree by more than
/// quad_tol relative to the largest term.
inline IdentityTerms assemble_identity_terms(const FieldPair& fp, const Density& gj,
                                             const Medium& med, const TruncatedSector& ts,
                                             CgoScale scale, int j = 0, int order = 10,
                                             double quad_tol = 1e-6) {
    IdentityTerms coarse = assemble_identity_terms_at(fp, gj, med, ts, scale, j, order);
    IdentityTerms fine = assemble_identity_terms_at(fp, gj, med, ts, scale, j, order + 6);
    const double ref = std::max(fine.max_term(), 1e-12);
    double diff = 0;
    diff = std::max(diff, std::abs(fine.I1 - coarse.I1));
    diff = std::max(diff, std::abs(fine.Delta_j - coarse.Delta_j));
    diff = std::max(diff, std::abs(fine.I3 - coarse.I3));
    diff = std::max(diff, std::abs(fine.I2_minus - coarse.I2_minus));
    diff = std::max(diff, std::abs(fine.I2_plus - coarse.I2_plus));
    diff = std::max(diff, std::abs(fine.xi_minus - coarse.xi_minus));
    diff = std::max(diff, std::abs(fine.xi_plus - coarse.xi_plus));
    if (diff > quad_tol * ref)
        throw QuadratureDivergence("assemble_identity_terms: refinement moved a term by " +
                                   std::to_string(diff / ref) + " relative");
    return fine;
}

struct I2AsymptoticReport {
    std::vector<double> s_values;
    std::vector<double> remainders;  // |I2 - closed leading term|, rays summed
    double slope = 0;                // log-log fit against s
    double required = 0;             // -min(1 + alpha_eff, 2) + 0.1
    bool pass = false;
};

/// Computes I2 on both rays by quadrature, subtracts the closed leading term
/// 2 eta(0) v_j(0) s^-1 (...) per ray, and fits the decay exponent of the
/// remainder. alpha_eff is the Holder exponent of eta when the Holder part is
/// present and 1 otherwise (the remainder is then O(s^-2)).
inline I2AsymptoticReport i2_asymptotic_check(const EtaSpec& eta, const Density& g, double k,
                                              const TruncatedSector& ts,
                                              std::span<const double> s_schedule,
                                              int order = 12) {
    if (s_schedule.size() < 3)
        throw std::invalid_argument("i2_asymptotic_check: need >= 3 scales");
    if (!(cgo_omega(ts.sector.theta_m) > 0 && cgo_omega(ts.sector.theta_M) > 0))
        throw std::invalid_argument("i2_asymptotic_check: omega must be positive on both rays");

    I2AsymptoticReport rep;
    auto vj = [&](const Vector2d& x) { return herglotz_eval(g, k, x); };
    const Complex vj0 = vj(Vector2d{0, 0});
    const double eta0 = eta(Vector2d{0, 0});

    for (double s : s_schedule) {
        auto ray_rem = [&](Region reg, double theta) {
            const auto ray = build_quadrature(ts, reg, order);
            const Complex mu = cgo_mu(theta);
            Complex i2 = 0;
            for (std::size_t i = 0; i < ray.nodes.size(); ++i) {
                const double r = ray.nodes[i].norm();
                i2 += ray.weights[i] * eta(ray.nodes[i]) *
                      std::exp(-std::sqrt(s * r) * mu) * vj(ray.nodes[i]);
            }
            return i2 - eta0 * vj0 * ray_exponential_closed(mu, s, ts.h);
        };
        const Complex rm = ray_rem(Region::boundary_ray_minus, ts.sector.theta_m);
        const Complex rp = ray_rem(Region::boundary_ray_plus, ts.sector.theta_M);
        rep.s_values.push_back(s);
        rep.remainders.push_back(std::abs(rm) + std::abs(rp));
    }
    rep.slope = loglog_slope(rep.s_values, rep.remainders, 1e-15);
    const double alpha_eff = eta.c != 0 ? eta.alpha : 1.0;
    rep.required = -std::min(1 + alpha_eff, 2.0) + 0.1;
    rep.pass = rep.slope <= rep.required;
    return rep;
}

/// Empirical trace constant: max ratio ||.||_{L2(ray)} / ||.||_{H1(S_h)} over
/// plane-wave probes, doubled for safety. The inequality constants are not
/// explicit, so the check reports the C it used.
inline double empirical_trace_constant(const TruncatedSector& ts, double k, int order = 10) {
    const auto area = build_quadrature(ts, Region::sector_area, order);
    double cmax = 0;
    for (int p = 0; p < 8; ++p) {
        const double phi = ts.sector.theta_m +
                           (ts.sector.opening()) * (p + 0.5) / 8.0;
        const Vector2d d(std::cos(phi), std::sin(phi));
        auto f = [&](const Vector2d& x) {
            const double ph = k * d.dot(x);
            return Complex(std::cos(ph), std::sin(ph));
        };
        double h1 = 0;
        for (std::size_t i = 0; i < area.nodes.size(); ++i)
            h1 += area.weights[i] * (std::norm(f(area.nodes[i])) * (1 + k * k));
        for (Region reg : {Region::boundary_ray_minus, Region::boundary_ray_plus}) {
            const auto ray = build_quadrature(ts, reg, order);
            double l2 = 0;
            for (std::size_t i = 0; i < ray.nodes.size(); ++i)
                l2 += ray.weights[i] * std::norm(f(ray.nodes[i]));
            cmax = std::max(cmax, std::sqrt(l2) / std::sqrt(h1));
        }
    }
    return 2 * cmax;
}

struct XiBoundReport {
    double xi_minus = 0, xi_plus = 0;  // quadrature magnitudes
    double bound = 0;                  // C * (closed expression) * ||v - v_j||_H1
    double trace_constant = 0;
    double h1_diff = 0;
    double margin = 0;  // bound / max measured xi
    bool pass = false;
};

/// Checks |xi_j| against the trace estimate with the mean-value point Theta
/// taken as 0 (conservative: the exponential factor becomes 1).
template <class V, class GV>
XiBoundReport xi_bound_check(V&& v, GV&& grad_v, const Density& gj, double k,
                             const EtaSpec& eta, const TruncatedSector& ts, CgoScale scale,
                             int order = 12) {
    XiBoundReport rep;
    const double s = scale.s;
    const double dth = ts.sector.opening();
    const double dW = delta_w(ts.sector);
    const double alpha = eta.alpha;

    const auto area = build_quadrature(ts, Region::sector_area, order);
    double h1 = 0;
    for (std::size_t i = 0; i < area.nodes.size(); ++i) {
        const Vector2d& x = area.nodes[i];
        const Complex dv = v(x) - herglotz_eval(gj, k, x);
        const Eigen::Vector2cd dg = grad_v(x) - herglotz_grad(gj, k, x);
        h1 += area.weights[i] * (std::norm(dv) + dg.squaredNorm());
    }
    rep.h1_diff = std::sqrt(h1);

    auto xi_ray = [&](Region reg, double theta) {
        const auto ray = build_quadrature(ts, reg, order);
        const Complex mu = cgo_mu(theta);
        Complex acc = 0;
        for (std::size_t i = 0; i < ray.nodes.size(); ++i) {
            const Vector2d& x = ray.nodes[i];
            acc += ray.weights[i] * eta(x) * std::exp(-std::sqrt(s * x.norm()) * mu) *
                   (v(x) - herglotz_eval(gj, k, x));
        }
        return std::abs(acc);
    };
    rep.xi_minus = xi_ray(Region::boundary_ray_minus, ts.sector.theta_m);
    rep.xi_plus = xi_ray(Region::boundary_ray_plus, ts.sector.theta_M);

    const double eta0 = std::abs(eta(Vector2d{0, 0}));
    const double holder = eta.c == 0 ? 0.0 : std::abs(eta.c);
    const double term1 = eta0 * std::sqrt(dth) * ts.h / std::sqrt(2.0);
    const double term2 = holder * std::pow(s, -(alpha + 1)) *
                         std::sqrt(2 * dth * std::tgamma(4 * alpha + 4)) /
                         std::pow(2 * dW, 2 * alpha + 2);
    rep.trace_constant = empirical_trace_constant(ts, k, order);
    rep.bound = rep.trace_constant * (term1 + term2) * rep.h1_diff;
    const double xi = std::max(rep.xi_minus, rep.xi_plus);
    rep.margin = xi > 0 ? rep.bound / xi : std::numeric_limits<double>::infinity();
    rep.pass = xi <= rep.bound;
    return rep;
}

struct MasterLimitReport {
    std::vector<int> j;
    std::vector<double> s_values;
    std::vector<double> product;    // |s/2 * RHS bracket of the multiplied identity|
    std::vector<double> vj0;        // |v_j(0)|
    std::vector<double> target;     // |eta(0) cc v_j(0)|
    std::vector<double> residual;   // identity residual per cell
    Complex corner_coeff;
    double beta = 0;
    double upsilon_hat = 0, varrho_hat = 0;
    bool degenerate_opening = false;
    bool product_trends_zero = false;
    bool vj0_trends_zero = false;
    bool pass = false;
};

/// Runs the limit argument at s = j^beta: fits v_j on the patch, assembles
/// the identity terms, and forms the multiplied right-hand side whose limit
/// is eta(0) (mu(theta_m)^-2 + mu(theta_M)^-2) v_j(0). The window
/// max{varrho_hat, 0} < beta < upsilon_hat is a precondition; for an
/// eigenpair with eta(0) != 0 the product and v_j(0) must co-trend to zero.
inline MasterLimitReport master_limit_check(const FieldPair& fp, const Medium& med,
                                            const TruncatedSector& ts,
                                            std::span<const int> schedule, double beta,
                                            double tau = 4, int grid_size = 48,
                                            int order = 10, double quad_tol = 1e-3) {
    auto fs = sample_field(ts, order, fp.v, fp.grad_v);
    auto adm = admissibility_scan(fs, fp.k, schedule, tau, grid_size);
    MasterLimitReport rep;
    rep.upsilon_hat = adm.upsilon_hat;
    rep.varrho_hat = adm.varrho_hat;
    if (!(beta > std::max(adm.varrho_hat, 0.0) && beta < adm.upsilon_hat))
        throw std::invalid_argument("master_limit_check: beta outside the admissible window");

    rep.beta = beta;
    rep.corner_coeff = corner_coefficient(ts.sector);
    rep.degenerate_opening = std::abs(rep.corner_coeff) < 1e-12;
    const double eta0 = med.eta(Vector2d{0, 0});

    for (int j : schedule) {
        auto fit = fit_density(fs, fp.k, grid_size, std::pow(double(j), -tau), j);
        const double s = std::pow(double(j), beta);
        auto t = assemble_identity_terms(fp, fit.density, med, ts, CgoScale(s), j, order,
                                         quad_tol);
        // RHS bracket: everything in the multiplied identity except the
        // closed leading terms of I2, which it must converge to.
        const Complex delta_f1j = t.int_f1j_u0 - t.f1j_0 * t.u0_area;
        const Complex delta_f2 = t.int_f2_u0 - t.f2_0 * t.u0_area;
        const Complex rhs = t.I3 - (t.f1j_0 - t.f2_0) * t.u0_area - t.Delta_j -
                            t.vj_0 * eta0 * (t.I21_minus + t.I21_plus) -
                            eta0 * (t.I22_minus + t.I22_plus) - t.I_eta_minus -
                            t.I_eta_plus - delta_f1j + delta_f2 - t.xi_minus - t.xi_plus;
        rep.j.push_back(j);
        rep.s_values.push_back(s);
        rep.product.push_back(std::abs(s / 2.0 * rhs));
        rep.vj0.push_back(std::abs(t.vj_0));
        rep.target.push_back(std::abs(eta0 * rep.corner_coeff * t.vj_0));
        rep.residual.push_back(t.residual());
    }
    rep.product_trends_zero = trends_to_zero(rep.product);
    rep.vj0_trends_zero = trends_to_zero(rep.vj0);
    rep.pass = rep.degenerate_opening ||
               (rep.product_trends_zero && rep.vj0_trends_zero);
    return rep;
}

struct EtaZeroLimitReport {
    std::vector<int> j;
    std::vector<double> vj0_error;  // |v_j(0) - (q w)(0)|
    Complex qw0;
    double beta = 0;
    double upsilon_hat = 0, varrho_hat = 0;
    bool pass = false;
};

/// Degenerate eta == 0 case: v_j(0) must trend to -f2(0)/k^2 = (q w)(0)
/// along s = j^beta with max{varrho_hat/alpha, 0} < beta < upsilon_hat/2.
inline EtaZeroLimitReport eta_zero_limit_check(const FieldPair& fp, const Medium& med,
                                               const TruncatedSector& ts,
                                               std::span<const int> schedule, double beta,
                                               double alpha = 0.5, double tau = 4,
                                               int grid_size = 48, int order = 10) {
    if (med.eta.eta0 != 0 || med.eta.c != 0)
        throw std::invalid_argument("eta_zero_limit_check: eta == 0 medium required");
    if (schedule.size() < 4)
        throw std::invalid_argument("eta_zero_limit_check: schedule needs >= 4 entries");

    auto fs = sample_field(ts, order, fp.v, fp.grad_v);
    auto adm = admissibility_scan(fs, fp.k, schedule, tau, grid_size);
    EtaZeroLimitReport rep;
    rep.upsilon_hat = adm.upsilon_hat;
    rep.varrho_hat = adm.varrho_hat;
    if (!(beta > std::max(adm.varrho_hat / alpha, 0.0) && beta < adm.upsilon_hat / 2))
        throw std::invalid_argument("eta_zero_limit_check: beta outside the admissible window");

    rep.beta = beta;
    rep.qw0 = med.q() * fp.w(Vector2d{0, 0});
    for (int j : schedule) {
        auto fit = fit_density(fs, fp.k, grid_size, std::pow(double(j), -tau), j);
        rep.j.push_back(j);
        rep.vj0_error.push_back(
            std::abs(herglotz_eval(fit.density, fp.k, Vector2d{0, 0}) - rep.qw0));
    }
    std::vector<double> idx(rep.j.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = double(rep.j[i]);
    rep.pass = rep.vj0_error.back() < rep.vj0_error.front() &&
               loglog_slope(idx, rep.vj0_error, 1e-15) < 0;
    return rep;
}

inline nlohmann::json identity_terms_to_json(const IdentityTerms& t) {
    auto c = [](Complex z) { return nlohmann::json{{"re", z.real()}, {"im", z.imag()}}; };
    return {{"s", t.s},
            {"j", t.j},
            {"I1", c(t.I1)},
            {"Delta_j", c(t.Delta_j)},
            {"I3", c(t.I3)},
            {"I2_minus", c(t.I2_minus)},
            {"I2_plus", c(t.I2_plus)},
            {"xi_minus", c(t.xi_minus)},
            {"xi_plus", c(t.xi_plus)},
            {"I21_minus", c(t.I21_minus)},
            {"I21_plus", c(t.I21_plus)},
            {"I22_minus", c(t.I22_minus)},
            {"I22_plus", c(t.I22_plus)},
            {"I_eta_minus", c(t.I_eta_minus)},
            {"I_eta_plus", c(t.I_eta_plus)},
            {"u0_area", c(t.u0_area)},
            {"vj_0", c(t.vj_0)},
            {"residual", t.residual()},
            {"max_term", t.max_term()}};
}

inline void write_identity_csv(std::ostream& os, std::span<const IdentityTerms> cells) {
    os << "s,j,term,re,im,abs\n";
    char buf[160];
    auto row = [&](const IdentityTerms& t, const char* name, Complex z) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%s,%.17g,%.17g,%.17g\n", t.s, t.j, name,
                      z.real(), z.imag(), std::abs(z));
        os << buf;
    };
    for (const auto& t : cells) {
        row(t, "I1", t.I1);
        row(t, "Delta_j", t.Delta_j);
        row(t, "I3", t.I3);
        row(t, "I2_minus", t.I2_minus);
        row(t, "I2_plus", t.I2_plus);
        row(t, "xi_minus", t.xi_minus);
        row(t, "xi_plus", t.xi_plus);
        row(t, "residual", Complex(t.residual(), 0));
    }
}

inline nlohmann::json master_limit_to_json(const MasterLimitReport& r) {
    return {{"j", r.j},
            {"s", r.s_values},
            {"product", r.product},
            {"vj0", r.vj0},
            {"target", r.target},
            {"residual", r.residual},
            {"corner_coeff_abs", std::abs(r.corner_coeff)},
            {"beta", r.beta},
            {"upsilon_hat", r.upsilon_hat},
            {"varrho_hat", r.varrho_hat},
            {"degenerate_opening", r.degenerate_opening},
            {"product_trends_zero", r.product_trends_zero},
            {"vj0_trends_zero", r.vj0_trends_zero},
            {"pass", r.pass}};
}

}  // namespace ctev
