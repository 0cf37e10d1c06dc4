#pragma once

#include "sara/geometry.hpp"
#include "sara/random.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace sara {

enum class Fading { off, rayleigh };

/// Powers are linear (watts). Defaults: 30 dBm transmit, -70 dBm noise.
struct ChannelParams {
    double alpha = 4.0;
    double tx_power = 1.0;
    double noise_power = 1e-10;
    Fading fading = Fading::rayleigh;

    /// Throws std::domain_error for alpha <= 2, std::invalid_argument for
    /// non-positive power or negative noise.
    void validate() const;
};

// Links shorter than this are evaluated at this distance.
inline constexpr double kMinDistance = 0.1;

// Returned by the SINR routines when noise is zero and nobody interferes.
inline constexpr double kNoInterference = std::numeric_limits<double>::infinity();

// Noise floor (-70 dBm) used to give an interference-free pair a finite
// SINR when the configured noise power is zero.
inline constexpr double kProxyNoise = 1e-10;

/// Dense n x n channel gains; (i, j) is the gain from transmitter i to the
/// receiver of pair j.
class GainMatrix {
public:
    GainMatrix() = default;
    explicit GainMatrix(std::size_t n) : n_(n), g_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t tx, std::size_t rx) const { return g_[tx * n_ + rx]; }
    double& operator()(std::size_t tx, std::size_t rx) { return g_[tx * n_ + rx]; }

private:
    std::size_t n_ = 0;
    std::vector<double> g_;
};

double pathloss_gain(double distance, double alpha);

/// Deterministic d^-alpha gains, ignoring the fading mode.
GainMatrix mean_gains(const Topology& t, const ChannelParams& p);

/// One slot of gains: mean gain times an i.i.d. unit-mean exponential
/// (Rayleigh) or 1 (fading off).
GainMatrix sample_gains(const Topology& t, const ChannelParams& p, std::uint64_t seed);

/// SINR at the receiver of pair `i` when the pairs in `active` transmit.
/// Throws ContractViolation if `i` is not in `active`.
double instantaneous_sinr(std::size_t i, std::span<const std::size_t> active, const GainMatrix& g,
                          const ChannelParams& p);

/// Slot SINR for every active pair in one pass. Gains come from `mean`;
/// with Rayleigh fading a fresh exponential is drawn from `rng` for each
/// (transmitter, receiver) link used. `out[k]` receives the SINR of
/// `active[k]`.
void active_sinrs(std::span<const std::uint32_t> active, const GainMatrix& mean,
                  const ChannelParams& p, Rng& rng, std::span<double> out);

/// Finite stand-in for the interference-free SINR of pair `i`: mean signal
/// power over the configured noise, or over kProxyNoise when that is zero.
double snr_proxy(const GainMatrix& mean, std::size_t i, const ChannelParams& p);

/// Sliding-window arithmetic mean of measured SINR samples.
class SinrEstimator {
public:
    explicit SinrEstimator(std::size_t window = 100);

    /// Appends a sample, evicting the oldest once `window` samples are held.
    /// Negative or NaN samples throw std::invalid_argument.
    void add_sample(double sir);
    std::optional<double> estimate() const;

    std::size_t window() const { return window_; }
    std::size_t sample_count() const { return samples_.size(); }
    void clear();

private:
    std::size_t window_;
    std::deque<double> samples_;
    double sum_ = 0.0;
    std::size_t evictions_ = 0;
};

/// CSV dump: pair_i,pair_j,gain
void write_gains_csv(std::ostream& os, const GainMatrix& g);

} // namespace sara
