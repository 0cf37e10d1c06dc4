#include "sara/channel.hpp"

#include "sara/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sara {

void ChannelParams::validate() const
{
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw std::domain_error("alpha must be > 2 (rho(alpha) has a pole at 2)");
    if (!(tx_power > 0.0) || !std::isfinite(tx_power))
        throw std::invalid_argument("tx_power must be > 0");
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
        throw std::invalid_argument("noise_power must be >= 0");
}

double pathloss_gain(double distance, double alpha)
{
    return std::pow(std::max(distance, kMinDistance), -alpha);
}

GainMatrix mean_gains(const Topology& t, const ChannelParams& p)
{
    const std::size_t n = t.size();
    GainMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g(i, j) = pathloss_gain(pair_distance(t, t.tx[i], t.rx[j]), p.alpha);
    return g;
}

GainMatrix sample_gains(const Topology& t, const ChannelParams& p, std::uint64_t seed)
{
    GainMatrix g = mean_gains(t, p);
    if (p.fading == Fading::off)
        return g;
    Rng rng(derive_seed(seed, Stream::channel));
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            g(i, j) *= unit_exponential(rng);
    return g;
}

double instantaneous_sinr(std::size_t i, std::span<const std::size_t> active, const GainMatrix& g,
                          const ChannelParams& p)
{
    if (std::find(active.begin(), active.end(), i) == active.end())
        throw ContractViolation("instantaneous_sinr: pair " + std::to_string(i) +
                                " is not transmitting");

    double interference = 0.0;
    for (std::size_t u : active)
        if (u != i)
            interference += g(u, i) * p.tx_power;
    double denom = interference + p.noise_power;
    if (denom == 0.0)
        return kNoInterference;
    return g(i, i) * p.tx_power / denom;
}

void active_sinrs(std::span<const std::uint32_t> active, const GainMatrix& mean,
                  const ChannelParams& p, Rng& rng, std::span<double> out)
{
    if (out.size() < active.size())
        throw std::invalid_argument("active_sinrs: output span too small");

    const bool fading = p.fading == Fading::rayleigh;
    for (std::size_t k = 0; k < active.size(); ++k) {
        const std::uint32_t i = active[k];
        double signal = mean(i, i);
        if (fading)
            signal *= unit_exponential(rng);
        double interference = 0.0;
        for (std::uint32_t u : active) {
            if (u == i)
                continue;
            double g = mean(u, i);
            if (fading)
                g *= unit_exponential(rng);
            interference += g;
        }
        double denom = interference * p.tx_power + p.noise_power;
        out[k] = denom == 0.0 ? kNoInterference : signal * p.tx_power / denom;
    }
}

double snr_proxy(const GainMatrix& mean, std::size_t i, const ChannelParams& p)
{
    double noise = p.noise_power > 0.0 ? p.noise_power : kProxyNoise;
    return mean(i, i) * p.tx_power / noise;
}

SinrEstimator::SinrEstimator(std::size_t window) : window_(window)
{
    if (window == 0)
        throw std::invalid_argument("estimator window must be >= 1");
}

void SinrEstimator::add_sample(double sir)
{
    if (!(sir >= 0.0))
        throw std::invalid_argument("SINR samples must be >= 0");
    samples_.push_back(sir);
    sum_ += sir;
    if (samples_.size() > window_) {
        sum_ -= samples_.front();
        samples_.pop_front();
        // Resum once per window so cancellation error cannot accumulate.
        if (++evictions_ >= window_) {
            evictions_ = 0;
            sum_ = 0.0;
            for (double v : samples_)
                sum_ += v;
        }
    }
}

std::optional<double> SinrEstimator::estimate() const
{
    if (samples_.empty())
        return std::nullopt;
    return std::max(0.0, sum_) / static_cast<double>(samples_.size());
}

void SinrEstimator::clear()
{
    samples_.clear();
    sum_ = 0.0;
    evictions_ = 0;
}

void write_gains_csv(std::ostream& os, const GainMatrix& g)
{
    os << "pair_i,pair_j,gain\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            os << i << ',' << j << ',' << g(i, j) << '\n';
}

} // namespace sara
