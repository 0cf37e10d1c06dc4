#pragma once

// Exact evaluation over every subset of concurrent interferers.
//
// For pair i the other n-1 pairs are numbered in increasing index order,
// skipping i, and a subset of them is a bit mask: bit b set means the b-th
// other pair transmits. Mask 0 is the empty interferer set.

#include "sara/channel.hpp"
#include "sara/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sara {

inline constexpr std::size_t kMaxEnumerationPairs = 20;

struct ProbBounds {
    double min = 0.01;
    double max = 1.0;

    /// Requires 0 < min <= max <= 1.
    void validate() const;
    double clamp(double v) const { return v < min ? min : (v > max ? max : v); }
};

/// Per-pair vector of transmit probabilities with its box constraints.
struct ProbVector {
    std::vector<double> values;
    ProbBounds bounds;

    /// Throws std::invalid_argument if bounds are invalid or any value lies
    /// outside them.
    void validate() const;
};

/// Fading-off SINR for every pair and every interferer subset.
class SubsetSinrTable {
public:
    /// Throws EnumerationLimit if the topology has more than
    /// kMaxEnumerationPairs pairs. The fading mode of `p` is ignored; the
    /// table always holds pathloss-only values. An interference-free entry
    /// that would be infinite (zero noise) holds snr_proxy instead.
    static SubsetSinrTable build(const Topology& t, const ChannelParams& p);

    std::size_t pairs() const { return n_; }
    std::size_t subsets_per_pair() const { return n_ == 0 ? 0 : std::size_t{1} << (n_ - 1); }
    /// Number of SINR evaluations performed by build(): n * 2^(n-1).
    std::size_t evaluations() const { return gamma_.size(); }

    double sinr(std::size_t i, std::uint32_t mask) const
    {
        return gamma_[i * subsets_per_pair() + mask];
    }
    std::span<const double> row(std::size_t i) const
    {
        return {gamma_.data() + i * subsets_per_pair(), subsets_per_pair()};
    }

    /// Index of pair `other` among the interferers of pair `i`.
    static std::size_t other_bit(std::size_t i, std::size_t other) { return other < i ? other : other - 1; }
    /// Pair index of interferer bit `b` for pair `i`.
    static std::size_t other_pair(std::size_t i, std::size_t b) { return b < i ? b : b + 1; }
    /// Mask of an explicit interferer set. Throws ContractViolation if the
    /// set contains `i` or an out-of-range index.
    std::uint32_t mask_of(std::size_t i, std::span<const std::size_t> subset) const;

private:
    std::size_t n_ = 0;
    std::vector<double> gamma_;
};

/// Probability that exactly the interferers in `mask` transmit alongside
/// pair i: prod over set bits of phi, prod over clear bits of (1 - phi).
double subset_probability(std::size_t i, std::uint32_t mask, std::span<const double> phi);
/// Set-based form; throws ContractViolation if `i` is in `subset`.
double subset_probability(std::size_t i, std::span<const std::size_t> subset,
                          std::span<const double> phi);

/// Expectation of `values` (one entry per interferer mask of pair i) under
/// the subset distribution induced by `phi`. O(2^(n-1)).
double subset_expectation(std::size_t i, std::span<const double> values,
                          std::span<const double> phi);

/// Expected number of successful pairs per slot:
/// sum_i phi_i * sum_j P(T_i^j) * [gamma >= beta].
double expected_success_count(const SubsetSinrTable& table, std::span<const double> phi,
                              double beta);
/// Builds the table first. Requires fading off and n <= kMaxEnumerationPairs.
double expected_success_count(const Topology& t, const ChannelParams& p,
                              std::span<const double> phi, double beta);

/// Average SINR of pair i given that it transmits.
double conditional_avg_sinr(std::size_t i, const SubsetSinrTable& table,
                            std::span<const double> phi);

/// Unclamped interference function: conditional_avg_sinr / beta.
double interference_function(std::size_t i, const SubsetSinrTable& table,
                             std::span<const double> phi, double beta);
double clamped_interference_function(std::size_t i, const SubsetSinrTable& table,
                                     std::span<const double> phi, double beta,
                                     const ProbBounds& bounds);

struct AxiomWitness {
    std::string property;
    std::size_t trial = 0;
    std::size_t pair = 0;
    double theta = 0.0;
    double value = 0.0;   // I(Phi)
    double other = 0.0;   // I(Phi') or I(theta Phi)
};

struct AxiomReport {
    std::size_t trials = 0;
    std::size_t positivity_failures = 0;
    std::size_t two_sided_failures = 0;
    std::size_t scalability_failures = 0;
    // Classic monotonicity is reported but not expected to hold: raising an
    // interferer's probability lowers the average SINR.
    std::size_t monotonicity_failures = 0;
    std::vector<AxiomWitness> witnesses;

    bool passed() const { return positivity_failures == 0 && two_sided_failures == 0 && scalability_failures == 0; }
};

struct AxiomCheckOptions {
    ProbBounds bounds;
    double max_theta = 2.0;
    bool clamped = false;
    std::size_t max_witnesses = 16;
};

/// Randomized check of positivity, two-sided scalability and the
/// I(theta Phi) <= theta I(Phi) special case. Each trial draws Phi uniform
/// in the bounds, theta uniform in (1, max_theta] and
/// Phi'_l = min(1, Phi_l * theta^u_l) with u_l uniform in [-1, 1], then
/// checks every coordinate.
AxiomReport check_axioms(const SubsetSinrTable& table, double beta, std::size_t trials,
                         std::uint64_t seed, const AxiomCheckOptions& options = {});

enum class UpdateOrder {
    synchronous,  // Jacobi: every coordinate from the previous iterate
    asynchronous, // Gauss-Seidel: coordinates updated in index order, in place
};

struct FixedPointOptions {
    double tolerance = 1e-6;
    std::size_t max_iterations = 10000;
    UpdateOrder order = UpdateOrder::synchronous;
    bool keep_trajectory = true;
};

struct FixedPointResult {
    std::vector<double> phi;
    // trajectory[0] is the start point; one entry per iteration after that.
    std::vector<std::vector<double>> trajectory;
    std::size_t iterations = 0;
    double residual = 0.0; // max |phi(t+1) - phi(t)| of the last iteration
    bool converged = false;
};

/// Iterates phi <- clamp(I(phi)) until the max coordinate change drops
/// below the tolerance or max_iterations is reached. Non-convergence is
/// reported in the result, not thrown.
FixedPointResult fixed_point_iterate(const SubsetSinrTable& table, double beta,
                                     const ProbVector& start, const FixedPointOptions& options = {});

/// max_i |clamp(I_i(phi)) - phi_i|; zero exactly at a fixed point.
double fixed_point_residual(const SubsetSinrTable& table, double beta, std::span<const double> phi,
                            const ProbBounds& bounds);

/// Per-pair utility clamp(I_i(phi)) * phi_i - phi_i^2 / 2.
double utility_value(std::size_t i, std::span<const double> phi, const SubsetSinrTable& table,
                     double beta, const ProbBounds& bounds);

/// Trajectory as CSV rows: iteration,pair,phi
void write_trajectory_csv(std::ostream& os, const FixedPointResult& r);
void write_axiom_report_csv(std::ostream& os, const AxiomReport& r);

} // namespace sara
