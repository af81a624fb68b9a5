#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctev/util.hpp"

namespace ctev {

using Eigen::Vector2d;

/// Open planar sector with vertex at the origin, theta_m < arg(x) < theta_M.
struct Sector {
    double theta_m;
    double theta_M;

    Sector(double tm, double tM) : theta_m(tm), theta_M(tM) {
        if (!(-pi < tm && tm < tM && tM < pi))
            throw std::invalid_argument("Sector: require -pi < theta_m < theta_M < pi");
    }

    double opening() const { return theta_M - theta_m; }

    /// Opening of exactly pi: the corner coefficient vanishes and the corner
    /// identity carries no information. Flagged, never rejected.
    bool degenerate_opening() const {
        return std::abs(opening() - pi) < 1e-14;
    }

    bool contains_angle(double theta) const {
        return theta_m < theta && theta < theta_M;
    }
};

/// Sector truncated at radius h. Boundary pieces: the two rays at theta_m
/// (minus) and theta_M (plus), and the arc at r = h.
struct TruncatedSector {
    Sector sector;
    double h;

    TruncatedSector(Sector s, double radius) : sector(s), h(radius) {
        if (!(h > 0)) throw std::invalid_argument("TruncatedSector: h > 0 required");
    }

    double area() const { return h * h * sector.opening() / 2; }
    double arc_length() const { return h * sector.opening(); }
};

enum class Region { sector_area, boundary_ray_plus, boundary_ray_minus, arc };

struct QuadratureRule {
    std::vector<Vector2d> nodes;
    std::vector<double> weights;
    Region target_region;

    double total_weight() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }

    template <typename F>
    auto integrate(F&& f) const {
        using R = decltype(f(nodes[0]) * 1.0);
        R acc{};
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += f(nodes[i]) * weights[i];
        return acc;
    }
};

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1 - x * x) * pp * pp);
    }
}

/// 1D rule on [a, b].
inline void gauss_legendre_ab(int n, double a, double b, std::vector<double>& nodes,
                              std::vector<double>& weights) {
    gauss_legendre(n, nodes, weights);
    for (int i = 0; i < n; ++i) {
        nodes[i] = 0.5 * (a + b) + 0.5 * (b - a) * nodes[i];
        weights[i] *= 0.5 * (b - a);
    }
}

/// Radial panels graded geometrically toward 0 (ratio 1/4): integrands built
/// from u0(sx) vary as exp(-sqrt(s r)) and need resolution near the corner.
inline std::vector<std::pair<double, double>> graded_panels(double h, int panels = 12,
                                                            double ratio = 0.25) {
    std::vector<std::pair<double, double>> out;
    double hi = h;
    for (int i = 0; i < panels - 1; ++i) {
        double lo = hi * ratio;
        out.emplace_back(lo, hi);
        hi = lo;
    }
    out.emplace_back(0.0, hi);
    return out;
}

/// Composite graded Gauss rule in r on [0, h], `order` points per panel.
inline void graded_radial_rule(double h, int order, std::vector<double>& nodes,
                               std::vector<double>& weights, int panels = 12) {
    nodes.clear();
    weights.clear();
    std::vector<double> pn, pw;
    for (auto [lo, hi] : graded_panels(h, panels)) {
        gauss_legendre_ab(order, lo, hi, pn, pw);
        nodes.insert(nodes.end(), pn.begin(), pn.end());
        weights.insert(weights.end(), pw.begin(), pw.end());
    }
}

inline double delta_w(const Sector& sec) {
    // delta_W = -max cos(theta/2 + pi) = min cos(theta/2); cos(theta/2) is
    // unimodal on (-pi, pi) so the minimum sits at an endpoint.
    const double d = std::min(std::cos(sec.theta_m / 2), std::cos(sec.theta_M / 2));
    if (d <= 0)
        throw std::domain_error("delta_w: sector too wide, CGO decay rate non-positive");
    return d;
}

/// Measure of B(corner, rho) intersected with the truncated sector S_h. The
/// ball is centered at the vertex, so the intersection is the sector of radius
/// min(rho, h); no quadrature needed.
inline double corner_ball_measure(const Sector& sec, double rho, double h) {
    if (!(rho > 0)) {
        if (rho == 0) return 0.0;
        throw std::invalid_argument("corner_ball_measure: rho >= 0 required");
    }
    const double r = std::min(rho, h);
    return r * r * sec.opening() / 2;
}

inline QuadratureRule build_quadrature(const TruncatedSector& ts, Region region,
                                       int order, int radial_panels = 12) {
    if (order < 1) throw std::invalid_argument("build_quadrature: order >= 1");
    QuadratureRule rule;
    rule.target_region = region;
    std::vector<double> rn, rw, tn, tw;
    switch (region) {
        case Region::sector_area: {
            graded_radial_rule(ts.h, order, rn, rw, radial_panels);
            gauss_legendre_ab(order, ts.sector.theta_m, ts.sector.theta_M, tn, tw);
            for (std::size_t i = 0; i < rn.size(); ++i)
                for (std::size_t j = 0; j < tn.size(); ++j) {
                    rule.nodes.emplace_back(rn[i] * std::cos(tn[j]),
                                            rn[i] * std::sin(tn[j]));
                    rule.weights.push_back(rw[i] * tw[j] * rn[i]);  // polar Jacobian
                }
            break;
        }
        case Region::boundary_ray_plus:
        case Region::boundary_ray_minus: {
            const double theta = region == Region::boundary_ray_plus
                                     ? ts.sector.theta_M
                                     : ts.sector.theta_m;
            graded_radial_rule(ts.h, order, rn, rw, radial_panels);
            for (std::size_t i = 0; i < rn.size(); ++i) {
                rule.nodes.emplace_back(rn[i] * std::cos(theta), rn[i] * std::sin(theta));
                rule.weights.push_back(rw[i]);
            }
            break;
        }
        case Region::arc: {
            gauss_legendre_ab(order, ts.sector.theta_m, ts.sector.theta_M, tn, tw);
            for (std::size_t j = 0; j < tn.size(); ++j) {
                rule.nodes.emplace_back(ts.h * std::cos(tn[j]), ts.h * std::sin(tn[j]));
                rule.weights.push_back(tw[j] * ts.h);  // arc length element
            }
            break;
        }
        default:
            throw std::invalid_argument("build_quadrature: unknown region kind");
    }
    return rule;
}

}  // namespace ctev
