#pragma once

#include <algorithm>
#include <ostream>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <json.hpp>

#include "ctev/geometry.hpp"
#include "ctev/special_fn.hpp"
#include "ctev/util.hpp"

namespace ctev {

/// Boundary coefficient eta(x) = eta0 + c |x - corner|^alpha.
struct EtaSpec {
    double eta0 = 0;
    double c = 0;
    double alpha = 0.5;
    Vector2d corner{0, 0};

    EtaSpec() = default;
    EtaSpec(double e0, double holder_c, double holder_alpha, Vector2d xc = {0, 0})
        : eta0(e0), c(holder_c), alpha(holder_alpha), corner(xc) {
        if (c != 0 && !(alpha > 0 && alpha < 1))
            throw std::invalid_argument("EtaSpec: alpha in (0,1) for the Holder form");
    }

    double operator()(const Vector2d& x) const {
        return c == 0 ? eta0 : eta0 + c * std::pow((x - corner).norm(), alpha);
    }
};

struct Medium {
    Complex V{0, 0};  // contrast, q = 1 + V
    EtaSpec eta;

    Complex q() const { return 1.0 + V; }

    /// Interior wavenumber k sqrt(1+V); the solver handles real V > -1 only.
    double kw(double k) const {
        if (V.imag() != 0)
            throw std::invalid_argument("Medium: complex V not supported by the solver");
        if (!(V.real() > -1)) throw std::invalid_argument("Medium: V > -1 required");
        return k * std::sqrt(1 + V.real());
    }
};

struct Disk {
    double radius = 1;
};
struct Pacman {
    TruncatedSector ts;  // corner at the origin
};
struct Polygon {
    std::vector<Vector2d> vertices;  // counterclockwise
};
using Domain = std::variant<Disk, Pacman, Polygon>;

struct BoundaryPoint {
    Vector2d x;
    Vector2d nu;  // outward unit normal
    double w = 1;  // arclength measure of the boundary cell
};

inline Complex normal_component(const Eigen::Vector2cd& g, const Vector2d& nu) {
    return g(0) * nu.x() + g(1) * nu.y();
}

/// J_nu for real nu >= 0 with GSL's abort-on-underflow defused: underflow is
/// a legitimate 0 for high orders at small argument.
inline double bessel_jnu(double nu, double t) {
    gsl_sf_result res;
    const int status = gsl_sf_bessel_Jnu_e(nu, t, &res);
    if (status == GSL_EUNDRFLW) return 0;
    if (status != 0) throw std::runtime_error("bessel_jnu: gsl failure");
    return res.val;
}

inline double domain_diameter(const Domain& dom) {
    if (auto* d = std::get_if<Disk>(&dom)) return 2 * d->radius;
    if (auto* p = std::get_if<Pacman>(&dom)) return 2 * p->ts.h;
    const auto& vs = std::get<Polygon>(dom).vertices;
    double m = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            m = std::max(m, (vs[i] - vs[j]).norm());
    return m;
}

/// Roughly arclength-uniform boundary sampling at segment midpoints; the
/// pacman corner itself is never a node.
inline std::vector<BoundaryPoint> boundary_points(const Domain& dom, int m_total) {
    if (m_total < 4) throw std::invalid_argument("boundary_points: m_total >= 4");
    std::vector<BoundaryPoint> out;
    if (auto* d = std::get_if<Disk>(&dom)) {
        for (int i = 0; i < m_total; ++i) {
            const double th = 2 * pi * (i + 0.5) / m_total;
            const Vector2d n(std::cos(th), std::sin(th));
            out.push_back({d->radius * n, n, 2 * pi * d->radius / m_total});
        }
        return out;
    }
    if (auto* p = std::get_if<Pacman>(&dom)) {
        const Sector& sec = p->ts.sector;
        const double h = p->ts.h;
        const double ray_len = h, arc_len = p->ts.arc_length();
        const double total = 2 * ray_len + arc_len;
        const int n_ray = std::max(2, int(std::lround(m_total * ray_len / total)));
        const int n_arc = std::max(2, m_total - 2 * n_ray);
        const Vector2d em(std::cos(sec.theta_m), std::sin(sec.theta_m));
        const Vector2d eM(std::cos(sec.theta_M), std::sin(sec.theta_M));
        const Vector2d nu_m(std::sin(sec.theta_m), -std::cos(sec.theta_m));
        const Vector2d nu_M(-std::sin(sec.theta_M), std::cos(sec.theta_M));
        for (int i = 0; i < n_ray; ++i) {
            const double r = h * (i + 0.5) / n_ray;
            out.push_back({r * em, nu_m, h / n_ray});
        }
        for (int i = 0; i < n_arc; ++i) {
            const double th = sec.theta_m + sec.opening() * (i + 0.5) / n_arc;
            const Vector2d n(std::cos(th), std::sin(th));
            out.push_back({h * n, n, arc_len / n_arc});
        }
        for (int i = 0; i < n_ray; ++i) {
            const double r = h * (i + 0.5) / n_ray;
            out.push_back({r * eM, nu_M, h / n_ray});
        }
        return out;
    }
    const auto& vs = std::get<Polygon>(dom).vertices;
    if (vs.size() < 3) throw std::invalid_argument("boundary_points: polygon needs >= 3 vertices");
    double perim = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        perim += (vs[(i + 1) % vs.size()] - vs[i]).norm();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Vector2d a = vs[i], b = vs[(i + 1) % vs.size()];
        const double len = (b - a).norm();
        const int n = std::max(2, int(std::lround(m_total * len / perim)));
        const Vector2d t = (b - a) / len;
        const Vector2d nu(t.y(), -t.x());
        for (int q = 0; q < n; ++q)
            out.push_back({a + (q + 0.5) / n * (b - a), nu, len / n});
    }
    return out;
}

struct CollocationBasis {
    enum class Kind { fourier_bessel, fundamental_solutions };
    Kind kind = Kind::fourier_bessel;
    int N = 8;  // FB: modes -N..N; MFS: charge count
    std::vector<Vector2d> charge_points;
    Vector2d origin{0, 0};
    // corner-adapted fractional orders nu = q pi / opening with near-integer
    // orders dropped (those duplicate integer modes), cos and sin per order,
    // angular phase measured from theta0
    std::vector<double> corner_nus;
    double theta0 = 0;

    static CollocationBasis fourier_bessel(int n_modes, Vector2d origin = {0, 0}) {
        if (n_modes < 2) throw std::invalid_argument("CollocationBasis: N >= 2");
        CollocationBasis b;
        b.kind = Kind::fourier_bessel;
        b.N = n_modes;
        b.origin = origin;
        return b;
    }

    /// Fourier-Bessel modes plus fractional-order corner terms matched to a
    /// sector opening; the fractional family captures the r^(pi/opening)
    /// behavior an entire basis cannot.
    static CollocationBasis sector_adapted(int n_modes, int n_corner, const Sector& sec,
                                           Vector2d origin = {0, 0}) {
        CollocationBasis b = fourier_bessel(n_modes, origin);
        if (n_corner < 0) throw std::invalid_argument("CollocationBasis: corner_terms >= 0");
        const double base = pi / sec.opening();
        for (int q = 1; int(b.corner_nus.size()) < n_corner; ++q) {
            const double nu = q * base;
            if (std::abs(nu - std::round(nu)) > 1e-9) b.corner_nus.push_back(nu);
        }
        b.theta0 = sec.theta_m;
        return b;
    }

    /// Charge points on an offset curve at 0.5 diam outside the polygon,
    /// placed radially from the centroid through boundary samples.
    static CollocationBasis fundamental_solutions(const Polygon& poly, int n_charges) {
        if (n_charges < 4) throw std::invalid_argument("CollocationBasis: N >= 4");
        CollocationBasis b;
        b.kind = Kind::fundamental_solutions;
        b.N = n_charges;
        Vector2d c(0, 0);
        for (const auto& v : poly.vertices) c += v;
        c /= double(poly.vertices.size());
        b.origin = c;
        const double off = 0.5 * domain_diameter(Domain(poly));
        auto bps = boundary_points(Domain(poly), n_charges);
        for (int i = 0; i < n_charges; ++i) {
            const Vector2d d = (bps[i].x - c).normalized();
            b.charge_points.push_back(bps[i].x + off * d);
        }
        return b;
    }

    int n_cols() const {
        return kind == Kind::fourier_bessel ? 2 * N + 1 + 2 * int(corner_nus.size()) : N;
    }

    Complex eval(int col, double kappa, const Vector2d& x) const {
        if (kind != Kind::fourier_bessel) {
            const double rho = (x - charge_points[col]).norm();
            return {gsl_sf_bessel_Y0(kappa * rho), 0.0};
        }
        const Vector2d y = x - origin;
        const double r = y.norm();
        if (col >= 2 * N + 1) {
            if (r < 1e-300) return {0, 0};
            const bool is_sin = (col - (2 * N + 1)) % 2;
            const double nu = corner_nus[(col - (2 * N + 1)) / 2];
            const double phi = nu * (std::atan2(y.y(), y.x()) - theta0);
            return {bessel_jnu(nu, kappa * r) *
                        (is_sin ? std::sin(phi) : std::cos(phi)),
                    0.0};
        }
        const int m = col - N;
        if (r < 1e-300) return m == 0 ? Complex(1, 0) : Complex(0, 0);
        const double th = std::atan2(y.y(), y.x());
        return bessel_j(std::abs(m), kappa * r) * Complex(std::cos(m * th), std::sin(m * th));
    }

    Eigen::Vector2cd grad(int col, double kappa, const Vector2d& x) const {
        if (kind != Kind::fourier_bessel) {
            const Vector2d d = x - charge_points[col];
            const double rho = d.norm();
            const double dY = -kappa * gsl_sf_bessel_Y1(kappa * rho);
            return {Complex(dY * d.x() / rho, 0), Complex(dY * d.y() / rho, 0)};
        }
        const Vector2d y = x - origin;
        const double r = y.norm();
        if (col >= 2 * N + 1) {
            const bool is_sin = (col - (2 * N + 1)) % 2;
            const double nu = corner_nus[(col - (2 * N + 1)) / 2];
            const double th = std::atan2(y.y(), y.x());
            const double phi = nu * (th - theta0);
            const double jnu = bessel_jnu(nu, kappa * r);
            // J'_nu = (nu/t) J_nu - J_{nu+1}; keeps all orders nonnegative
            const double djnu =
                nu / (kappa * r) * jnu - bessel_jnu(nu + 1, kappa * r);
            const double trig = is_sin ? std::sin(phi) : std::cos(phi);
            const double dtrig = nu * (is_sin ? std::cos(phi) : -std::sin(phi));
            const double ur = kappa * djnu * trig;
            const double ut = jnu * dtrig;
            const double c = y.x() / r, s = y.y() / r;
            return {Complex(c * ur - s / r * ut, 0), Complex(s * ur + c / r * ut, 0)};
        }
        const int m = col - N;
        if (r < 1e-14) {
            // only |m| = 1 has a nonzero gradient at the center
            if (m == 1) return {Complex(kappa / 2, 0), Complex(0, kappa / 2)};
            if (m == -1) return {Complex(kappa / 2, 0), Complex(0, -kappa / 2)};
            return Eigen::Vector2cd::Zero();
        }
        const double th = std::atan2(y.y(), y.x());
        const Complex e(std::cos(m * th), std::sin(m * th));
        const Complex ur = kappa * bessel_j_prime(std::abs(m), kappa * r) * e;
        const Complex ut = Complex(0, double(m)) * bessel_j(std::abs(m), kappa * r) * e;
        const double c = y.x() / r, s = y.y() / r;
        return {c * ur - s / r * ut, s * ur + c / r * ut};
    }
};

/// Interior area rule for normalization and volume integrals.
inline QuadratureRule area_quadrature(const Domain& dom, int order) {
    if (auto* p = std::get_if<Pacman>(&dom))
        return build_quadrature(p->ts, Region::sector_area, order);
    if (auto* d = std::get_if<Disk>(&dom)) {
        // polar rule about the center; radius is smooth so no grading needed
        QuadratureRule rule;
        rule.target_region = Region::sector_area;
        std::vector<double> rn, rw, tn, tw;
        gauss_legendre_ab(4 * order, 0.0, d->radius, rn, rw);
        gauss_legendre_ab(4 * order, 0.0, 2 * pi, tn, tw);
        for (std::size_t i = 0; i < rn.size(); ++i)
            for (std::size_t j = 0; j < tn.size(); ++j) {
                rule.nodes.emplace_back(rn[i] * std::cos(tn[j]), rn[i] * std::sin(tn[j]));
                rule.weights.push_back(rn[i] * rw[i] * tw[j]);
            }
        return rule;
    }
    const auto& vs = std::get<Polygon>(dom).vertices;
    Vector2d c(0, 0);
    for (const auto& v : vs) c += v;
    c /= double(vs.size());
    QuadratureRule rule;
    rule.target_region = Region::sector_area;
    std::vector<double> un, uw;
    gauss_legendre_ab(2 * order, 0.0, 1.0, un, uw);
    for (std::size_t e = 0; e < vs.size(); ++e) {
        const Vector2d a = vs[e], b = vs[(e + 1) % vs.size()];
        const double jac = std::abs((a - c).x() * (b - c).y() - (a - c).y() * (b - c).x());
        for (std::size_t i = 0; i < un.size(); ++i)
            for (std::size_t j = 0; j < un.size(); ++j) {
                // Duffy map of the unit square onto the triangle (c, a, b)
                const double u = un[i], t = un[j];
                rule.nodes.push_back(c + u * ((1 - t) * (a - c) + t * (b - c)));
                rule.weights.push_back(jac * u * uw[i] * uw[j]);
            }
    }
    return rule;
}

/// Collocation matrix with its column scaling and the sample set that built it.
struct Assembly {
    Eigen::MatrixXcd A;  // boundary condition rows
    Eigen::MatrixXcd C;  // interior rows sampling w - v (dip normalization)
    Eigen::VectorXd col_scale;
    std::vector<BoundaryPoint> points;
    int n_w = 0;  // leading columns belong to w
};

inline Assembly assemble(double k, const Domain& dom, const Medium& med,
                         const CollocationBasis& basis, int oversample = 2) {
    if (k <= 0) throw std::invalid_argument("assemble: k > 0");
    if (basis.n_cols() == 0) throw std::invalid_argument("assemble: empty basis");
    const int nc = basis.n_cols();
    const double kw = med.kw(k), kv = k;
    Assembly as;
    as.n_w = nc;
    as.points = boundary_points(dom, std::max(oversample * nc, 16));
    const int M = int(as.points.size());
    as.A.resize(2 * M, 2 * nc);
    for (int i = 0; i < M; ++i) {
        const auto& bp = as.points[i];
        const double eta = med.eta(bp.x);
        const double sw = std::sqrt(bp.w);
        for (int j = 0; j < nc; ++j) {
            const Complex w = basis.eval(j, kw, bp.x);
            const Complex v = basis.eval(j, kv, bp.x);
            const Complex dw = normal_component(basis.grad(j, kw, bp.x), bp.nu);
            const Complex dv = normal_component(basis.grad(j, kv, bp.x), bp.nu);
            as.A(2 * i, j) = sw * w;
            as.A(2 * i, nc + j) = -sw * v;
            as.A(2 * i + 1, j) = sw * dw;
            as.A(2 * i + 1, nc + j) = -sw * (dv + eta * v);
        }
    }
    const auto inner = area_quadrature(dom, 3);
    const int Mi = int(inner.nodes.size());
    as.C.resize(Mi, 2 * nc);
    for (int i = 0; i < Mi; ++i) {
        const double sw = std::sqrt(inner.weights[i]);
        for (int j = 0; j < nc; ++j) {
            as.C(i, j) = sw * basis.eval(j, kw, inner.nodes[i]);
            as.C(i, nc + j) = -sw * basis.eval(j, kv, inner.nodes[i]);
        }
    }
    as.col_scale.resize(2 * nc);
    for (int j = 0; j < 2 * nc; ++j) {
        double n = as.A.col(j).norm();
        if (n == 0) n = 1;
        as.col_scale(j) = n;
        as.A.col(j) /= n;
        as.C.col(j) /= n;
    }
    return as;
}

/// Subspace-angle dip statistic: smallest boundary-condition residual among
/// fields of unit combined (boundary + interior w - v) norm. High angular
/// modes have w ~ v identically at small argument, which floors the raw
/// sigma_min of A alone; including the interior mass of w - v in the
/// normalization restores an O(1) background between eigenvalues.
inline double dip_statistic(const Assembly& as, Eigen::VectorXcd* vec = nullptr) {
    // Rich bases (notably fractional corner orders together with integer
    // modes) can be numerically dependent on the domain: some coefficient
    // directions give w and v fields that vanish to machine precision both
    // on the boundary and inside, which would fake a dip at every k.
    // Restrict to the numerical column space of the stacked matrix first.
    Eigen::MatrixXcd stacked(as.A.rows() + as.C.rows(), as.A.cols());
    stacked << as.A, as.C;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(stacked,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-10 * sv(0)) ++rank;
    // Columns of U span attainable (boundary, interior) value pairs with unit
    // total norm; the smallest singular value of the boundary block is the
    // least boundary defect among fields of unit combined norm.
    const Eigen::MatrixXcd QA = svd.matrixU().topRows(as.A.rows()).leftCols(rank);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd2(QA, Eigen::ComputeThinV);
    const double sigma = svd2.singularValues()(rank - 1);
    if (vec) {
        const Eigen::VectorXcd t = svd2.matrixV().col(rank - 1);
        *vec = svd.matrixV().leftCols(rank) *
               (t.array() / sv.head(rank).array()).matrix();
    }
    return sigma;
}

inline double sigma_min(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

/// Golden-section minimizer on [a, b]; returns (argmin, min).
template <class F>
std::pair<double, double> golden_min(F f, double a, double b, double tol, int max_iter = 200) {
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && b - a > tol; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

struct EigenScanResult {
    std::vector<double> k_grid;
    std::vector<double> sigmas;
    std::vector<std::pair<double, double>> detected_minima;  // (k*, sigma)
    double dip_threshold = 1e-3;
};

inline EigenScanResult scan(double k_lo, double k_hi, int n_steps, const Domain& dom,
                            const Medium& med, const CollocationBasis& basis,
                            double dip_threshold = 1e-3) {
    if (!(k_lo > 0) || k_hi < k_lo) throw std::invalid_argument("scan: 0 < k_lo <= k_hi");
    EigenScanResult res;
    res.dip_threshold = dip_threshold;
    if (k_hi == k_lo) {
        res.k_grid.push_back(k_lo);
        res.sigmas.push_back(dip_statistic(assemble(k_lo, dom, med, basis)));
        return res;
    }
    for (int i = 0; i <= n_steps; ++i)
        res.k_grid.push_back(k_lo + (k_hi - k_lo) * i / n_steps);
    res.sigmas.resize(res.k_grid.size());
    for (std::size_t i = 0; i < res.k_grid.size(); ++i)
        res.sigmas[i] = dip_statistic(assemble(res.k_grid[i], dom, med, basis));
    std::vector<double> sorted = res.sigmas;
    std::sort(sorted.begin(), sorted.end());
    const double med_sigma = sorted[sorted.size() / 2];
    auto f = [&](double k) { return dip_statistic(assemble(k, dom, med, basis)); };
    for (std::size_t i = 1; i + 1 < res.sigmas.size(); ++i)
        if (res.sigmas[i] < res.sigmas[i - 1] && res.sigmas[i] < res.sigmas[i + 1] &&
            res.sigmas[i] < 0.5 * med_sigma) {
            // candidate dip: the grid undersamples the minimum, so refine it
            // before applying the threshold
            auto [kd, sd] = golden_min(f, res.k_grid[i - 1], res.k_grid[i + 1],
                                       1e-9 * std::max(1.0, k_hi));
            if (sd < dip_threshold * med_sigma) res.detected_minima.emplace_back(kd, sd);
        }
    return res;
}

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Transmission eigenpair: k*, basis coefficients, and analytic evaluators.
struct Eigenpair {
    double k_star = 0;
    double sigma = 0;
    double residual = 0;  // max boundary defect relative to the field scale
    Medium medium;
    CollocationBasis basis;
    Eigen::VectorXcd coeffs_w, coeffs_v;

    Complex v(const Vector2d& x) const { return field(coeffs_v, k_star, x); }
    Complex w(const Vector2d& x) const { return field(coeffs_w, medium.kw(k_star), x); }
    Eigen::Vector2cd grad_v(const Vector2d& x) const { return grad(coeffs_v, k_star, x); }
    Eigen::Vector2cd grad_w(const Vector2d& x) const {
        return grad(coeffs_w, medium.kw(k_star), x);
    }

  private:
    Complex field(const Eigen::VectorXcd& c, double kappa, const Vector2d& x) const {
        Complex acc = 0;
        for (int j = 0; j < c.size(); ++j) acc += c(j) * basis.eval(j, kappa, x);
        return acc;
    }
    Eigen::Vector2cd grad(const Eigen::VectorXcd& c, double kappa, const Vector2d& x) const {
        Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
        for (int j = 0; j < c.size(); ++j) acc += c(j) * basis.grad(j, kappa, x);
        return acc;
    }
};

/// Golden-section minimization of sigma_min over [a, b] followed by singular
/// vector extraction and L2(Omega) normalization of v.
inline Eigenpair refine_and_extract(double a, double b, const Domain& dom, const Medium& med,
                                    const CollocationBasis& basis, double tol = 1e-10,
                                    int quad_order = 12) {
    if (!(a > 0) || !(b > a)) throw std::invalid_argument("refine_and_extract: 0 < a < b");
    auto f = [&](double k) { return dip_statistic(assemble(k, dom, med, basis)); };
    const double gr = (std::sqrt(5.0) - 1) / 2;
    {
        const double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        if (std::min(f(x1), f(x2)) > std::min(f(a), f(b)))
            throw BracketError("refine_and_extract: statistic not unimodal in bracket");
    }
    const double k_star = golden_min(f, a, b, tol * std::max(1.0, b)).first;

    Assembly as = assemble(k_star, dom, med, basis);
    const int nc = as.n_w;
    Eigen::VectorXcd null;
    const double sigma = dip_statistic(as, &null);
    for (int j = 0; j < 2 * nc; ++j) null(j) /= as.col_scale(j);

    Eigenpair ep;
    ep.k_star = k_star;
    ep.sigma = sigma;
    ep.medium = med;
    ep.basis = basis;
    ep.coeffs_w = null.head(nc);
    ep.coeffs_v = null.tail(nc);

    const auto rule = area_quadrature(dom, quad_order);
    double nrm2 = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        nrm2 += rule.weights[i] * std::norm(ep.v(rule.nodes[i]));
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0) throw std::runtime_error("refine_and_extract: null field");
    ep.coeffs_w /= nrm;
    ep.coeffs_v /= nrm;

    // boundary defect at check points offset from the collocation nodes
    auto check = boundary_points(dom, int(as.points.size()) + 7);
    double scale = 0, defect = 0;
    for (const auto& bp : check) scale = std::max(scale, std::abs(ep.v(bp.x)));
    for (const auto& bp : check) {
        const Complex w = ep.w(bp.x), v = ep.v(bp.x);
        const Complex dw = normal_component(ep.grad_w(bp.x), bp.nu);
        const Complex dv = normal_component(ep.grad_v(bp.x), bp.nu);
        defect = std::max(defect, std::abs(w - v));
        defect = std::max(defect, std::abs(dw - dv - med.eta(bp.x) * v));
    }
    ep.residual = defect / std::max(scale, 1e-300);
    return ep;
}

/// Separated-variables determinant for the unit disk: roots in k are the
/// conductive transmission eigenvalues of mode m.
inline Complex disk_oracle(int m, double k, const Medium& med, bool* degenerate = nullptr) {
    const double eta = med.eta.eta0;
    if (degenerate) *degenerate = med.V == Complex(0, 0) && eta == 0;
    const double kw = med.kw(k);
    const double a = bessel_j(std::abs(m), kw);
    const double b = -bessel_j(std::abs(m), k);
    const double c = kw * bessel_j_prime(std::abs(m), kw);
    const double d = -(k * bessel_j_prime(std::abs(m), k) + eta * bessel_j(std::abs(m), k));
    return Complex(a * d - b * c, 0);
}

/// All oracle roots in (k_lo, k_hi) over modes 0..m_max, by sign-change scan
/// plus bisection.
inline std::vector<std::pair<double, int>> disk_oracle_roots(double k_lo, double k_hi,
                                                             const Medium& med, int m_max,
                                                             int grid = 4000) {
    std::vector<std::pair<double, int>> roots;
    for (int m = 0; m <= m_max; ++m) {
        double prev_k = k_lo, prev_f = disk_oracle(m, k_lo, med).real();
        for (int i = 1; i <= grid; ++i) {
            const double k = k_lo + (k_hi - k_lo) * i / grid;
            const double fk = disk_oracle(m, k, med).real();
            if (prev_f == 0 || prev_f * fk < 0) {
                double lo = prev_k, hi = k, flo = prev_f;
                for (int it = 0; it < 80; ++it) {
                    const double mid = (lo + hi) / 2;
                    const double fm = disk_oracle(m, mid, med).real();
                    if (flo * fm <= 0)
                        hi = mid;
                    else {
                        lo = mid;
                        flo = fm;
                    }
                }
                roots.emplace_back((lo + hi) / 2, m);
            }
            prev_k = k;
            prev_f = fk;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline void write_scan_csv(std::ostream& os, const EigenScanResult& res) {
    os << "k,sigma_min\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < res.k_grid.size(); ++i)
        os << num(res.k_grid[i]) << ',' << num(res.sigmas[i]) << '\n';
}

inline nlohmann::json eigenpair_to_json(const Eigenpair& ep) {
    auto cvec = [](const Eigen::VectorXcd& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (int i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
        return arr;
    };
    return {{"k_star", ep.k_star},
            {"sigma", ep.sigma},
            {"residual", ep.residual},
            {"V", {ep.medium.V.real(), ep.medium.V.imag()}},
            {"eta0", ep.medium.eta.eta0},
            {"eta_c", ep.medium.eta.c},
            {"eta_alpha", ep.medium.eta.alpha},
            {"basis", ep.basis.kind == CollocationBasis::Kind::fourier_bessel
                          ? "fourier_bessel"
                          : "fundamental_solutions"},
            {"basis_N", ep.basis.N},
            {"coeffs_w", cvec(ep.coeffs_w)},
            {"coeffs_v", cvec(ep.coeffs_v)}};
}

}  // namespace ctev
