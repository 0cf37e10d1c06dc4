#include "sara/aloha_analytic.hpp"

#include "sara/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sara {

namespace {

// Maximum ASE constant; the closed form evaluates exp(-1) exactly.
const double kInvE = std::exp(-1.0);

// density * r^2 * beta^(2/alpha) * rho(alpha): the outage exponent per unit phi.
double outage_scale(const AlohaParams& p)
{
    return p.density * p.link_distance * p.link_distance * std::pow(p.beta, 2.0 / p.alpha) *
           rho(p.alpha);
}

void check_phi(double phi)
{
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::invalid_argument("phi must lie in [0, 1]");
}

} // namespace

void AlohaParams::validate() const
{
    if (!(alpha > 2.0))
        throw std::domain_error("alpha must be > 2");
    if (!(density > 0.0) || !(link_distance > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("density, link_distance and beta must be > 0");
}

double rho(double alpha)
{
    if (!(alpha > 2.0))
        throw std::domain_error("rho(alpha) requires alpha > 2");
    const double x = 2.0 * std::numbers::pi / alpha;
    return 2.0 * std::numbers::pi * std::numbers::pi / alpha / std::sin(x);
}

double success_probability(const AlohaParams& p, double phi)
{
    p.validate();
    check_phi(phi);
    return std::exp(-phi * outage_scale(p));
}

double ase_curve(const AlohaParams& p, double phi)
{
    return p.density * phi * rate_bits(p.beta) * success_probability(p, phi);
}

double optimal_phi_unclamped(const AlohaParams& p)
{
    p.validate();
    return 1.0 / outage_scale(p);
}

double optimal_phi(const AlohaParams& p)
{
    return std::min(1.0, optimal_phi_unclamped(p));
}

double max_ase(const AlohaParams& p)
{
    if (optimal_phi_unclamped(p) > 1.0)
        return ase_curve(p, 1.0);
    return max_ase_closed_form(p);
}

double max_ase_closed_form(const AlohaParams& p)
{
    p.validate();
    const double r2 = p.link_distance * p.link_distance;
    return kInvE * rate_bits(p.beta) / (r2 * std::pow(p.beta, 2.0 / p.alpha) * rho(p.alpha));
}

double numeric_argmax_phi(const AlohaParams& p, int grid_points, double tolerance)
{
    if (grid_points < 3)
        throw std::invalid_argument("numeric_argmax_phi: need at least 3 grid points");

    const double step = 1.0 / (grid_points - 1);
    int best = 0;
    double best_value = -1.0;
    for (int k = 0; k < grid_points; ++k) {
        double v = ase_curve(p, k * step);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    double lo = std::max(0.0, (best - 1) * step);
    double hi = std::min(1.0, (best + 1) * step);

    // Golden-section search on the unimodal bracket.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = ase_curve(p, a);
    double fb = ase_curve(p, b);
    while (hi - lo > tolerance) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = ase_curve(p, b);
        }
        else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = ase_curve(p, a);
        }
    }
    return 0.5 * (lo + hi);
}

void write_ase_table_csv(std::ostream& os, const AlohaParams& p, int points)
{
    if (points < 2)
        throw std::invalid_argument("ase table needs at least 2 points");
    os << "phi,success_probability,ase\n";
    for (int k = 0; k < points; ++k) {
        const double phi = static_cast<double>(k) / (points - 1);
        os << phi << ',' << success_probability(p, phi) << ',' << ase_curve(p, phi) << '\n';
    }
}

} // namespace sara
