#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ctev/cgo.hpp"
#include "ctev/geometry.hpp"
#include "ctev/special_fn.hpp"
#include "ctev/util.hpp"

namespace ctev {

using Eigen::Vector3d;

/// Kernel g sampled on the unit circle (dimension 2) or sphere (dimension 3).
/// Directions live in R^3 with the circle embedded at z = 0; weights are the
/// matching quadrature weights, so sum w_i |g_i|^2 is the L2 norm squared.
struct Density {
    int dimension = 2;
    std::vector<Vector3d> xi;
    std::vector<double> weights;
    std::vector<Complex> samples;

    /// Uniform angular grid phi_i = 2 pi i / n, trapezoid weights.
    static Density circle(int n) {
        if (n < 1) throw std::invalid_argument("Density::circle: n >= 1");
        Density d;
        d.dimension = 2;
        d.xi.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double phi = 2 * pi * i / n;
            d.xi.emplace_back(std::cos(phi), std::sin(phi), 0.0);
            d.weights.push_back(2 * pi / n);
        }
        d.samples.assign(n, Complex(0, 0));
        return d;
    }

    /// Gauss-Legendre in the polar cosine, uniform azimuth.
    static Density sphere(int n_polar, int n_azimuth) {
        if (n_polar < 1 || n_azimuth < 1)
            throw std::invalid_argument("Density::sphere: positive grid sizes");
        Density d;
        d.dimension = 3;
        std::vector<double> u, w;
        gauss_legendre_ab(n_polar, -1.0, 1.0, u, w);
        for (int q = 0; q < n_polar; ++q) {
            const double st = std::sqrt(std::max(0.0, 1 - u[q] * u[q]));
            for (int m = 0; m < n_azimuth; ++m) {
                const double a = 2 * pi * m / n_azimuth;
                d.xi.emplace_back(st * std::cos(a), st * std::sin(a), u[q]);
                d.weights.push_back(w[q] * 2 * pi / n_azimuth);
            }
        }
        d.samples.assign(d.xi.size(), Complex(0, 0));
        return d;
    }

    template <class F>
    void fill(F f) {
        for (std::size_t i = 0; i < xi.size(); ++i) samples[i] = f(xi[i]);
    }

    double l2_norm() const {
        double acc = 0;
        for (std::size_t i = 0; i < xi.size(); ++i)
            acc += weights[i] * std::norm(samples[i]);
        return std::sqrt(acc);
    }
};

inline Complex herglotz_eval(const Density& g, double k, const Vector2d& x) {
    if (g.dimension != 2) throw std::invalid_argument("herglotz_eval: 2D density required");
    Complex acc = 0;
    for (std::size_t i = 0; i < g.xi.size(); ++i) {
        const double phase = k * (g.xi[i].x() * x.x() + g.xi[i].y() * x.y());
        acc += g.weights[i] * g.samples[i] * Complex(std::cos(phase), std::sin(phase));
    }
    return acc;
}

inline Complex herglotz_eval(const Density& g, double k, const Vector3d& x) {
    if (g.dimension != 3) throw std::invalid_argument("herglotz_eval: 3D density required");
    Complex acc = 0;
    for (std::size_t i = 0; i < g.xi.size(); ++i) {
        const double phase = k * g.xi[i].dot(x);
        acc += g.weights[i] * g.samples[i] * Complex(std::cos(phase), std::sin(phase));
    }
    return acc;
}

/// Analytic gradient: the ik xi factor under the integral sign.
inline Eigen::Vector2cd herglotz_grad(const Density& g, double k, const Vector2d& x) {
    if (g.dimension != 2) throw std::invalid_argument("herglotz_grad: 2D density required");
    Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
    const Complex ik(0, k);
    for (std::size_t i = 0; i < g.xi.size(); ++i) {
        const double phase = k * (g.xi[i].x() * x.x() + g.xi[i].y() * x.y());
        const Complex e = g.weights[i] * g.samples[i] * Complex(std::cos(phase), std::sin(phase));
        acc(0) += ik * g.xi[i].x() * e;
        acc(1) += ik * g.xi[i].y() * e;
    }
    return acc;
}

/// Truncated cylindrical-wave expansion: gamma_0 J_0(kr) + 2 sum_p i^p
/// J_p(kr) gamma_p with gamma_p the cosine moments of g about the direction
/// of x (2D), and sum_l i^l (2l+1) j_l(kr) gamma_l with Legendre moments (3D).
inline Complex jacobi_anger_eval(const Density& g, double k, const Vector3d& x, int P) {
    if (P < 0) throw std::invalid_argument("jacobi_anger_eval: P >= 0");
    const double r = x.norm();
    const Complex I(0, 1);
    if (g.dimension == 2) {
        const double thx = r > 0 ? std::atan2(x.y(), x.x()) : 0.0;
        Complex acc = 0;
        Complex ip = 1;
        for (int p = 0; p <= P; ++p) {
            Complex gamma = 0;
            for (std::size_t i = 0; i < g.xi.size(); ++i) {
                const double phi = std::atan2(g.xi[i].y(), g.xi[i].x());
                gamma += g.weights[i] * g.samples[i] * std::cos(p * (phi - thx));
            }
            acc += (p == 0 ? 1.0 : 2.0) * ip * bessel_j(p, k * r) * gamma;
            ip *= I;
        }
        return acc;
    }
    const Vector3d xhat = r > 0 ? Vector3d(x / r) : Vector3d(0, 0, 1);
    Complex acc = 0;
    Complex il = 1;
    for (int l = 0; l <= P; ++l) {
        Complex gamma = 0;
        for (std::size_t i = 0; i < g.xi.size(); ++i)
            gamma += g.weights[i] * g.samples[i] * legendre_p(l, g.xi[i].dot(xhat));
        acc += il * (2.0 * l + 1.0) * spherical_j(l, k * r) * gamma;
        il *= I;
    }
    return acc;
}

/// Legendre moments gamma_l = int g(xi) P_l(xi . axis) dsigma(xi) on S^2.
inline Complex legendre_moment(const Density& g, int l, const Vector3d& axis) {
    if (g.dimension != 3) throw std::invalid_argument("legendre_moment: 3D density required");
    Complex acc = 0;
    for (std::size_t i = 0; i < g.xi.size(); ++i)
        acc += g.weights[i] * g.samples[i] * legendre_p(l, g.xi[i].dot(axis));
    return acc;
}

/// Field data on the fitting region: values and analytic gradients at
/// quadrature nodes, with the node weights defining the discrete H1 norm.
struct FieldSamples {
    std::vector<Vector2d> points;
    std::vector<Complex> values;
    std::vector<Eigen::Vector2cd> gradients;
    std::vector<double> weights;
};

/// Samples a (value, gradient) field over S_h with an area quadrature rule.
template <class FVal, class FGrad>
FieldSamples sample_field(const TruncatedSector& ts, int order, FVal value, FGrad grad) {
    FieldSamples fs;
    const auto rule = build_quadrature(ts, Region::sector_area, order);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        fs.points.push_back(rule.nodes[i]);
        fs.values.push_back(value(rule.nodes[i]));
        fs.gradients.push_back(grad(rule.nodes[i]));
        fs.weights.push_back(rule.weights[i]);
    }
    return fs;
}

struct FitResult {
    Density density;
    double residual = 0;  // discrete H1 discrepancy on the sample set
    double reg_lambda = 0;
    int j_index = 0;
};

struct RankDeficiency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tikhonov least squares for the kernel: min |H g - v|_{H1-discrete}^2 +
/// lambda |g|_{L2(S^1)}^2 over a circle grid of grid_size samples. The
/// Herglotz operator rows carry sqrt(node weight) so the residual is the
/// quadrature H1 discrepancy.
inline FitResult fit_density(const FieldSamples& fs, double k, int grid_size,
                             double reg_lambda, int j_index = 0) {
    if (grid_size < 2) throw std::invalid_argument("fit_density: grid_size >= 2");
    if (reg_lambda < 0) throw std::invalid_argument("fit_density: lambda >= 0");
    Density g = Density::circle(grid_size);

    const std::size_t ns = fs.points.size(), n = g.xi.size();
    Eigen::MatrixXcd A(3 * ns, n);
    Eigen::VectorXcd b(3 * ns);
    const Complex ik(0, k);
    for (std::size_t i = 0; i < ns; ++i) {
        const double sw = std::sqrt(fs.weights[i]);
        for (std::size_t j = 0; j < n; ++j) {
            const double phase =
                k * (g.xi[j].x() * fs.points[i].x() + g.xi[j].y() * fs.points[i].y());
            const Complex e =
                g.weights[j] * Complex(std::cos(phase), std::sin(phase));
            A(3 * i, j) = sw * e;
            A(3 * i + 1, j) = sw * ik * g.xi[j].x() * e;
            A(3 * i + 2, j) = sw * ik * g.xi[j].y() * e;
        }
        b(3 * i) = sw * fs.values[i];
        b(3 * i + 1) = sw * fs.gradients[i](0);
        b(3 * i + 2) = sw * fs.gradients[i](1);
    }

    // Circle weights are uniform, so the penalty is (2 pi / n) lambda |coef|^2
    // and the Tikhonov solution is an SVD filter sigma/(sigma^2 + c lambda).
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double c = g.weights[0] * reg_lambda;
    if (reg_lambda == 0 && sv(sv.size() - 1) < 1e-12 * sv(0))
        throw RankDeficiency(
            "fit_density: normal system singular at lambda = 0; pass lambda > 0");
    Eigen::VectorXcd y = svd.matrixU().adjoint() * b;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        y(i) *= sv(i) / (sv(i) * sv(i) + c);
    Eigen::VectorXcd coef = svd.matrixV() * y;

    for (std::size_t j = 0; j < n; ++j) g.samples[j] = coef(j);
    FitResult out;
    out.density = std::move(g);
    out.residual = (A * coef - b).norm();
    out.reg_lambda = reg_lambda;
    out.j_index = j_index;
    return out;
}

/// Residual-decay vs kernel-growth exponents along a j-schedule with the
/// lambda_j = j^{-tau} convention.
struct AdmissibilityReport {
    std::vector<int> j;
    std::vector<double> residuals;
    std::vector<double> norms;
    double upsilon_hat = 0;  // slope of -log residual vs log j
    double varrho_hat = 0;   // slope of log norm vs log j
    bool admissible = false;
    bool strict_admissible = false;  // varrho_hat < 1 and residual_j <= j^{-1-upsilon_hat}
    bool unreliable_fit = false;     // non-monotone residuals
    double tau = 4;
    int grid_size = 0;
};

inline AdmissibilityReport admissibility_scan(const FieldSamples& fs, double k,
                                              std::span<const int> schedule,
                                              double tau = 4, int grid_size = 64) {
    if (schedule.size() < 4)
        throw std::invalid_argument("admissibility_scan: schedule needs >= 4 entries");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("admissibility_scan: schedule must increase");

    AdmissibilityReport rep;
    rep.tau = tau;
    rep.grid_size = grid_size;
    for (int j : schedule) {
        auto fit = fit_density(fs, k, grid_size, std::pow(double(j), -tau), j);
        rep.j.push_back(j);
        rep.residuals.push_back(std::max(fit.residual, 1e-16));
        rep.norms.push_back(std::max(fit.density.l2_norm(), 1e-16));
    }
    for (std::size_t i = 1; i < rep.residuals.size(); ++i)
        if (rep.residuals[i] > rep.residuals[i - 1] * (1 + 1e-9)) rep.unreliable_fit = true;

    // fit exponents past the preasymptotic range j < 8 when enough points remain
    std::vector<double> lj, lr, ln;
    for (std::size_t i = 0; i < rep.j.size(); ++i)
        if (rep.j[i] >= 8 || rep.j.size() < 4 + 2) {
            lj.push_back(std::log(double(rep.j[i])));
            lr.push_back(std::log(rep.residuals[i]));
            ln.push_back(std::log(rep.norms[i]));
        }
    if (lj.size() < 2)
        for (std::size_t i = 0; i < rep.j.size(); ++i) {
            lj.push_back(std::log(double(rep.j[i])));
            lr.push_back(std::log(rep.residuals[i]));
            ln.push_back(std::log(rep.norms[i]));
        }
    rep.upsilon_hat = -linear_fit(lj, lr).second;
    rep.varrho_hat = linear_fit(lj, ln).second;
    rep.admissible = rep.varrho_hat < rep.upsilon_hat;

    rep.strict_admissible = rep.varrho_hat < 1;
    for (std::size_t i = 0; i < rep.j.size() && rep.strict_admissible; ++i)
        if (rep.residuals[i] > std::pow(double(rep.j[i]), -1 - rep.upsilon_hat) * 10)
            rep.strict_admissible = false;
    return rep;
}

inline nlohmann::json admissibility_to_json(const AdmissibilityReport& r) {
    return {{"j", r.j},
            {"residuals", r.residuals},
            {"norms", r.norms},
            {"upsilon_hat", r.upsilon_hat},
            {"varrho_hat", r.varrho_hat},
            {"admissible", r.admissible},
            {"strict_admissible", r.strict_admissible},
            {"unreliable_fit", r.unreliable_fit},
            {"lambda_schedule", "j^-tau"},
            {"tau", r.tau},
            {"grid_size", r.grid_size}};
}

inline void write_admissibility_csv(std::ostream& os, const AdmissibilityReport& r) {
    os << "j,residual,norm\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < r.j.size(); ++i)
        os << r.j[i] << ',' << num(r.residuals[i]) << ',' << num(r.norms[i]) << '\n';
}

}  // namespace ctev
