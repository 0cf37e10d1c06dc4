#include "sara/exact_oracle.hpp"

#include "sara/errors.hpp"
#include "sara/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sara {

void ProbBounds::validate() const
{
    if (!(min > 0.0) || !(min <= max) || !(max <= 1.0))
        throw std::invalid_argument("probability bounds must satisfy 0 < min <= max <= 1");
}

void ProbVector::validate() const
{
    bounds.validate();
    for (double v : values)
        if (!(v >= bounds.min && v <= bounds.max))
            throw std::invalid_argument("probability outside [phi_min, phi_max]");
}

SubsetSinrTable SubsetSinrTable::build(const Topology& t, const ChannelParams& p)
{
    p.validate();
    const std::size_t n = t.size();
    if (n > kMaxEnumerationPairs)
        throw EnumerationLimit("exact enumeration supports at most " +
                               std::to_string(kMaxEnumerationPairs) + " pairs, got " +
                               std::to_string(n));

    SubsetSinrTable table;
    table.n_ = n;
    if (n == 0)
        return table;

    const GainMatrix g = mean_gains(t, p);
    const std::size_t subsets = table.subsets_per_pair();
    table.gamma_.resize(n * subsets);

    std::vector<double> interference(subsets);
    for (std::size_t i = 0; i < n; ++i) {
        const double signal = g(i, i) * p.tx_power;
        interference[0] = 0.0;
        for (std::size_t mask = 1; mask < subsets; ++mask) {
            // Extend the subset without its lowest set bit by that one interferer.
            const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
            interference[mask] = interference[mask & (mask - 1)] +
                                 g(other_pair(i, low), i) * p.tx_power;
        }
        double* row = table.gamma_.data() + i * subsets;
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            const double denom = interference[mask] + p.noise_power;
            row[mask] = denom > 0.0 ? signal / denom : snr_proxy(g, i, p);
        }
    }
    return table;
}

std::uint32_t SubsetSinrTable::mask_of(std::size_t i, std::span<const std::size_t> subset) const
{
    std::uint32_t mask = 0;
    for (std::size_t u : subset) {
        if (u == i)
            throw ContractViolation("interferer subset contains the pair itself");
        if (u >= n_)
            throw ContractViolation("interferer index out of range");
        mask |= std::uint32_t{1} << other_bit(i, u);
    }
    return mask;
}

double subset_probability(std::size_t i, std::uint32_t mask, std::span<const double> phi)
{
    double prob = 1.0;
    for (std::size_t b = 0; b + 1 < phi.size(); ++b) {
        const double p = phi[SubsetSinrTable::other_pair(i, b)];
        prob *= (mask >> b) & 1u ? p : 1.0 - p;
    }
    return prob;
}

double subset_probability(std::size_t i, std::span<const std::size_t> subset,
                          std::span<const double> phi)
{
    std::uint32_t mask = 0;
    for (std::size_t u : subset) {
        if (u == i)
            throw ContractViolation("subset_probability: pair is in its own interferer set");
        if (u >= phi.size())
            throw ContractViolation("subset_probability: interferer index out of range");
        mask |= std::uint32_t{1} << SubsetSinrTable::other_bit(i, u);
    }
    return subset_probability(i, mask, phi);
}

double subset_expectation(std::size_t i, std::span<const double> values,
                          std::span<const double> phi)
{
    const std::size_t others = phi.empty() ? 0 : phi.size() - 1;
    if (values.size() != (std::size_t{1} << others))
        throw std::invalid_argument("subset_expectation: value count must be 2^(n-1)");

    // Contract one interferer axis at a time, highest bit first.
    thread_local std::vector<double> scratch;
    scratch.assign(values.begin(), values.end());
    for (std::size_t b = others; b-- > 0;) {
        const std::size_t half = std::size_t{1} << b;
        const double p = phi[SubsetSinrTable::other_pair(i, b)];
        const double q = 1.0 - p;
        for (std::size_t k = 0; k < half; ++k)
            scratch[k] = q * scratch[k] + p * scratch[k + half];
    }
    return scratch[0];
}

double expected_success_count(const SubsetSinrTable& table, std::span<const double> phi,
                              double beta)
{
    if (phi.size() != table.pairs())
        throw std::invalid_argument("expected_success_count: phi size mismatch");

    std::vector<double> indicator(table.subsets_per_pair());
    double total = 0.0;
    for (std::size_t i = 0; i < table.pairs(); ++i) {
        auto row = table.row(i);
        for (std::size_t m = 0; m < row.size(); ++m)
            indicator[m] = row[m] >= beta ? 1.0 : 0.0;
        total += phi[i] * subset_expectation(i, indicator, phi);
    }
    return total;
}

double expected_success_count(const Topology& t, const ChannelParams& p,
                              std::span<const double> phi, double beta)
{
    if (p.fading != Fading::off)
        throw std::invalid_argument("expected_success_count: exact enumeration requires fading off");
    return expected_success_count(SubsetSinrTable::build(t, p), phi, beta);
}

double conditional_avg_sinr(std::size_t i, const SubsetSinrTable& table,
                            std::span<const double> phi)
{
    if (phi.size() != table.pairs() || i >= table.pairs())
        throw std::invalid_argument("conditional_avg_sinr: index or size mismatch");
    return subset_expectation(i, table.row(i), phi);
}

double interference_function(std::size_t i, const SubsetSinrTable& table,
                             std::span<const double> phi, double beta)
{
    return conditional_avg_sinr(i, table, phi) / beta;
}

double clamped_interference_function(std::size_t i, const SubsetSinrTable& table,
                                     std::span<const double> phi, double beta,
                                     const ProbBounds& bounds)
{
    return bounds.clamp(interference_function(i, table, phi, beta));
}

namespace {

// Relative slack for floating-point comparisons of mathematically equal sides.
constexpr double kAxiomSlack = 1e-12;

bool leq(double a, double b) { return a <= b + kAxiomSlack * std::max(std::abs(a), std::abs(b)); }

} // namespace

AxiomReport check_axioms(const SubsetSinrTable& table, double beta, std::size_t trials,
                         std::uint64_t seed, const AxiomCheckOptions& options)
{
    if (trials == 0)
        throw std::invalid_argument("check_axioms: trials must be >= 1");
    options.bounds.validate();
    if (!(options.max_theta > 1.0))
        throw std::invalid_argument("check_axioms: max_theta must be > 1");

    const std::size_t n = table.pairs();
    Rng rng(derive_seed(seed, Stream::axioms));
    AxiomReport report;
    report.trials = trials;

    auto eval = [&](std::size_t i, std::span<const double> phi) {
        return options.clamped ? clamped_interference_function(i, table, phi, beta, options.bounds)
                               : interference_function(i, table, phi, beta);
    };
    auto witness = [&](const char* prop, std::size_t trial, std::size_t i, double theta, double a,
                       double b) {
        if (report.witnesses.size() < options.max_witnesses)
            report.witnesses.push_back({prop, trial, i, theta, a, b});
    };

    std::vector<double> phi(n), phi_prime(n), phi_scaled(n), phi_hi(n), phi_lo(n);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const double span = options.bounds.max - options.bounds.min;
        for (double& v : phi)
            v = options.bounds.min + span * uniform01(rng);
        const double theta = 1.0 + (options.max_theta - 1.0) * (1.0 - uniform01(rng));
        for (std::size_t l = 0; l < n; ++l) {
            const double u = 2.0 * uniform01(rng) - 1.0;
            phi_prime[l] = std::min(1.0, phi[l] * std::pow(theta, u));
            phi_scaled[l] = std::min(1.0, phi[l] * theta);
            phi_hi[l] = std::max(phi[l], phi_prime[l]);
            phi_lo[l] = std::min(phi[l], phi_prime[l]);
        }

        bool positivity_ok = true, two_sided_ok = true, scal_ok = true, mono_ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double base = eval(i, phi);
            const double moved = eval(i, phi_prime);
            const double scaled = eval(i, phi_scaled);

            if (!(base > 0.0)) {
                positivity_ok = false;
                witness("positivity", trial, i, theta, base, base);
            }
            if (!leq(base / theta, moved) || !leq(moved, theta * base)) {
                two_sided_ok = false;
                witness("two_sided", trial, i, theta, base, moved);
            }
            if (!leq(scaled, theta * base)) {
                scal_ok = false;
                witness("scalability", trial, i, theta, base, scaled);
            }
            if (!leq(eval(i, phi_lo), eval(i, phi_hi)))
                mono_ok = false;
        }
        report.positivity_failures += positivity_ok ? 0 : 1;
        report.two_sided_failures += two_sided_ok ? 0 : 1;
        report.scalability_failures += scal_ok ? 0 : 1;
        report.monotonicity_failures += mono_ok ? 0 : 1;
    }
    return report;
}

double fixed_point_residual(const SubsetSinrTable& table, double beta, std::span<const double> phi,
                            const ProbBounds& bounds)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < table.pairs(); ++i)
        worst = std::max(worst,
                         std::abs(clamped_interference_function(i, table, phi, beta, bounds) - phi[i]));
    return worst;
}

FixedPointResult fixed_point_iterate(const SubsetSinrTable& table, double beta,
                                     const ProbVector& start, const FixedPointOptions& options)
{
    start.validate();
    if (start.values.size() != table.pairs())
        throw std::invalid_argument("fixed_point_iterate: start vector size mismatch");

    const ProbBounds& bounds = start.bounds;
    const std::size_t n = table.pairs();
    FixedPointResult result;
    result.phi = start.values;
    if (options.keep_trajectory)
        result.trajectory.push_back(result.phi);
    if (n == 0) {
        result.converged = true;
        return result;
    }

    std::vector<double> next(n);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        double change = 0.0;
        if (options.order == UpdateOrder::synchronous) {
            for (std::size_t i = 0; i < n; ++i)
                next[i] = clamped_interference_function(i, table, result.phi, beta, bounds);
            for (std::size_t i = 0; i < n; ++i)
                change = std::max(change, std::abs(next[i] - result.phi[i]));
            result.phi.swap(next);
        }
        else {
            for (std::size_t i = 0; i < n; ++i) {
                const double v = clamped_interference_function(i, table, result.phi, beta, bounds);
                change = std::max(change, std::abs(v - result.phi[i]));
                result.phi[i] = v;
            }
        }
        result.iterations = it + 1;
        result.residual = change;
        if (options.keep_trajectory)
            result.trajectory.push_back(result.phi);
        if (change < options.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

double utility_value(std::size_t i, std::span<const double> phi, const SubsetSinrTable& table,
                     double beta, const ProbBounds& bounds)
{
    const double reward = clamped_interference_function(i, table, phi, beta, bounds);
    return reward * phi[i] - 0.5 * phi[i] * phi[i];
}

void write_trajectory_csv(std::ostream& os, const FixedPointResult& r)
{
    os << "iteration,pair,phi\n";
    for (std::size_t it = 0; it < r.trajectory.size(); ++it)
        for (std::size_t i = 0; i < r.trajectory[it].size(); ++i)
            os << it << ',' << i << ',' << r.trajectory[it][i] << '\n';
}

void write_axiom_report_csv(std::ostream& os, const AxiomReport& r)
{
    os << "property,trials,failures\n";
    os << "positivity," << r.trials << ',' << r.positivity_failures << '\n';
    os << "two_sided_scalability," << r.trials << ',' << r.two_sided_failures << '\n';
    os << "scalability," << r.trials << ',' << r.scalability_failures << '\n';
    os << "monotonicity_informational," << r.trials << ',' << r.monotonicity_failures << '\n';
    if (!r.witnesses.empty()) {
        os << "\nwitness_property,trial,pair,theta,I_phi,I_other\n";
        for (const auto& w : r.witnesses)
            os << w.property << ',' << w.trial << ',' << w.pair << ',' << w.theta << ',' << w.value
               << ',' << w.other << '\n';
    }
}

} // namespace sara
