#pragma once

// Closed-form slotted ALOHA on a Poisson field with Rayleigh fading and no
// noise. All quantities are linear; beta is the SIR threshold.

#include <iosfwd>

namespace sara {

struct AlohaParams {
    double density = 0.02;      // transmitters per m^2
    double link_distance = 5.0; // m
    double beta = 1.9952623149688795; // 3 dB
    double alpha = 4.0;

    /// std::invalid_argument for non-positive values, std::domain_error for
    /// alpha <= 2.
    void validate() const;
};

/// 2 pi^2 / alpha * csc(2 pi / alpha). Throws std::domain_error for alpha <= 2.
double rho(double alpha);

/// exp(-density * phi * r^2 * beta^(2/alpha) * rho(alpha)).
double success_probability(const AlohaParams& p, double phi);

/// Area spectral efficiency in bit/s/Hz/m^2:
/// density * phi * log2(1 + beta) * success_probability.
double ase_curve(const AlohaParams& p, double phi);

/// 1 / (density * r^2 * beta^(2/alpha) * rho), before clamping.
double optimal_phi_unclamped(const AlohaParams& p);
/// optimal_phi_unclamped clamped to 1.
double optimal_phi(const AlohaParams& p);

/// e^-1 * log2(1 + beta) / (r^2 * beta^(2/alpha) * rho). Does not depend on
/// the density; only attained when optimal_phi_unclamped(p) <= 1.
double max_ase_closed_form(const AlohaParams& p);
/// max_ase_closed_form when the optimum is interior; ase_curve(p, 1) otherwise.
double max_ase(const AlohaParams& p);

/// Numeric maximizer of ase_curve on [0, 1]: coarse grid followed by
/// golden-section refinement in the bracketing cell.
double numeric_argmax_phi(const AlohaParams& p, int grid_points = 1001, double tolerance = 1e-12);

/// CSV: phi,success_probability,ase
void write_ase_table_csv(std::ostream& os, const AlohaParams& p, int points);

} // namespace sara
