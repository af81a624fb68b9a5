#pragma once

#include <ostream>
#include <vector>

#include "ctev/eigensolver.hpp"
#include "ctev/geometry.hpp"
#include "ctev/util.hpp"

namespace ctev {

struct DecayCurve {
    std::vector<double> rhos;      // strictly decreasing
    std::vector<double> averages;  // nonnegative
    double fitted_rate = 0;        // slope of log average vs log rho
    Vector2d corner{0, 0};
};

/// Mean of |field| over B(corner, rho) intersected with the sector, by
/// tensor polar Gauss quadrature; the intersection measure is rho^2 dtheta/2.
template <class F>
double local_average(F&& field, const Vector2d& corner, double rho, const Sector& sec,
                     int order = 24) {
    if (!(rho > 0)) throw std::invalid_argument("local_average: rho > 0");
    std::vector<double> rn, rw, tn, tw;
    gauss_legendre_ab(order, 0, rho, rn, rw);
    gauss_legendre_ab(order, sec.theta_m, sec.theta_M, tn, tw);
    double acc = 0;
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            const Vector2d x = corner + rn[i] * Vector2d(std::cos(tn[j]), std::sin(tn[j]));
            acc += rw[i] * tw[j] * rn[i] * std::abs(field(x));
        }
    return acc / (rho * rho * sec.opening() / 2);
}

/// Corner-ball averages along a decreasing radius schedule with a power-law
/// rate fit; averages under the 1e-14 floor are excluded from the fit.
template <class F>
DecayCurve decay_curve(F&& field, const Vector2d& corner, std::span<const double> rho_schedule,
                       const Sector& sec, int order = 24) {
    DecayCurve dc;
    dc.corner = corner;
    for (std::size_t i = 0; i < rho_schedule.size(); ++i) {
        if (i > 0 && !(rho_schedule[i] < rho_schedule[i - 1]))
            throw std::invalid_argument("decay_curve: radii must be strictly decreasing");
        dc.rhos.push_back(rho_schedule[i]);
        dc.averages.push_back(local_average(field, corner, rho_schedule[i], sec, order));
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < dc.rhos.size(); ++i)
        if (dc.averages[i] > 1e-14) {
            lx.push_back(std::log(dc.rhos[i]));
            ly.push_back(std::log(dc.averages[i]));
        }
    if (lx.size() < 5)
        throw std::domain_error("decay_curve: rate fit needs >= 5 points above the floor");
    dc.fitted_rate = linear_fit(lx, ly).second;
    return dc;
}

/// Signed complex mean of V w over the corner ball; requires eta == 0 (the
/// interior-field average is the relevant limit only in that regime).
inline Complex vw_average(const Eigenpair& ep, Complex V, const Vector2d& corner, double rho,
                          const Sector& sec, int order = 24) {
    if (ep.medium.eta.eta0 != 0 || ep.medium.eta.c != 0)
        throw std::invalid_argument("vw_average: eta == 0 medium required");
    if (!(rho > 0)) throw std::invalid_argument("vw_average: rho > 0");
    std::vector<double> rn, rw, tn, tw;
    gauss_legendre_ab(order, 0, rho, rn, rw);
    gauss_legendre_ab(order, sec.theta_m, sec.theta_M, tn, tw);
    Complex acc = 0;
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            const Vector2d x = corner + rn[i] * Vector2d(std::cos(tn[j]), std::sin(tn[j]));
            acc += rw[i] * tw[j] * rn[i] * ep.w(x);
        }
    return V * acc / (rho * rho * sec.opening() / 2);
}

inline void write_decay_csv(std::ostream& os, const DecayCurve& dc) {
    os << "rho,average\n";
    char buf[64];
    for (std::size_t i = 0; i < dc.rhos.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", dc.rhos[i], dc.averages[i]);
        os << buf;
    }
}

/// Log-log polyline of the decay curve; averages are floored at 1e-16 so a
/// vanished point stays on the canvas.
inline void write_decay_svg(std::ostream& os, const DecayCurve& dc, int width = 480,
                            int height = 320) {
    const double margin = 40;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < dc.rhos.size(); ++i) {
        lx.push_back(std::log10(dc.rhos[i]));
        ly.push_back(std::log10(std::max(dc.averages[i], 1e-16)));
        xlo = std::min(xlo, lx.back());
        xhi = std::max(xhi, lx.back());
        ylo = std::min(ylo, ly.back());
        yhi = std::max(yhi, ly.back());
    }
    if (xhi - xlo < 1e-12) xhi = xlo + 1;
    if (yhi - ylo < 1e-12) yhi = ylo + 1;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    char buf[64];
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double px = margin + (lx[i] - xlo) / (xhi - xlo) * (width - 2 * margin);
        const double py = height - margin - (ly[i] - ylo) / (yhi - ylo) * (height - 2 * margin);
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
        os << buf;
    }
    os << "\"/>\n";
    std::snprintf(buf, sizeof buf, "%.4f", dc.fitted_rate);
    os << "<text x=\"" << margin << "\" y=\"" << margin / 2
       << "\" font-size=\"12\">log avg vs log rho, rate " << buf << "</text>\n";
    os << "</svg>\n";
}

}  // namespace ctev
