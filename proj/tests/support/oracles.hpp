#pragma once

// Reference implementations used only by the tests. They recompute every
// quantity from coordinates with the most direct formula available and
// share no code with the library beyond the Topology type.

#include "sara/geometry.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace sara::reference {

struct RefChannel {
    double alpha = 4.0;
    double power = 1.0;
    double noise = 1e-10;
};

/// Euclidean or minimum-image distance, clamped below at 0.1 m.
double ref_distance(const Topology& t, Point a, Point b);

/// SINR of pair i when exactly the pairs with active[j] == true transmit.
/// Interference-free with zero noise gives signal / 1e-10.
double ref_sinr(const Topology& t, std::size_t i, const std::vector<bool>& active, const RefChannel& c);

/// Sum over all 2^n joint patterns of P(pattern) * #successes.
double ref_expected_successes(const Topology& t, const std::vector<double>& phi, double beta,
                              const RefChannel& c);

/// E[SINR_i | i transmits] by enumerating every joint pattern.
double ref_conditional_sinr(const Topology& t, std::size_t i, const std::vector<double>& phi,
                            const RefChannel& c);

/// Integral of 2 pi r / (1 + r^alpha) over [0, inf) by adaptive Simpson.
double ref_rho(double alpha);

/// E[1 / sum_k a_k X_k] for i.i.d. unit exponentials X_k, via
/// integral over s of prod_k 1 / (1 + a_k s).
double ref_inverse_sum_mean(const std::vector<double>& a);

/// Central finite difference of f at x.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// Small deterministic generator for property tests.
class PropertyRng {
public:
    explicit PropertyRng(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}
    std::uint64_t next();
    double uniform(double lo, double hi);
    std::size_t index(std::size_t n);

private:
    std::uint64_t state_;
};

/// Layout with pairs spread evenly on a line; pair k's transmitter at
/// (x0 + k * spacing, y) and its receiver `link` metres above it.
Topology line_topology(std::size_t pairs, double spacing, double link, Region region = {});

} // namespace sara::reference
