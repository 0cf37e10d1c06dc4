#include "sara/mac_schemes.hpp"

#include "sara/aloha_analytic.hpp"
#include "sara/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sara {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void check_probability(double v, const char* what)
{
    if (!(v > 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
}

void check_window(std::size_t w)
{
    if (w == 0)
        throw std::invalid_argument("window must be >= 1 slot");
}

bool at_window_end(std::uint64_t slot, std::size_t window)
{
    return (slot + 1) % window == 0;
}

class AlohaPolicy final : public MacPolicy {
public:
    AlohaPolicy(std::string name, std::vector<double> phi) : name_(std::move(name)), phi_(std::move(phi)) {}

    std::string name() const override { return name_; }
    void decide(Rng& rng, std::span<std::uint8_t> transmit) override
    {
        for (std::size_t i = 0; i < phi_.size(); ++i)
            transmit[i] = bernoulli(rng, phi_[i]) ? 1 : 0;
    }
    std::span<const double> probabilities() const override { return phi_; }

private:
    std::string name_;
    std::vector<double> phi_;
};

class SaraPolicy final : public MacPolicy {
public:
    SaraPolicy(std::size_t n, const Sara& spec, double beta)
        : spec_(spec), beta_(beta), phi_(n, spec.bounds.max),
          estimators_(n, SinrEstimator(spec.window))
    {}

    std::string name() const override { return "sara"; }
    void decide(Rng& rng, std::span<std::uint8_t> transmit) override
    {
        for (std::size_t i = 0; i < phi_.size(); ++i)
            transmit[i] = bernoulli(rng, phi_[i]) ? 1 : 0;
    }
    void feedback(std::size_t pair, const Feedback& fb) override
    {
        if (fb.transmitted && fb.measured_sir)
            estimators_[pair].add_sample(*fb.measured_sir);
    }
    void end_slot(std::uint64_t slot) override
    {
        if (!at_window_end(slot, spec_.window))
            return;
        // The estimators slide over the last `window` samples and are not
        // reset, so a pair that rarely transmits still averages a full window.
        for (std::size_t i = 0; i < phi_.size(); ++i)
            phi_[i] = sara_update(phi_[i], estimators_[i].estimate(), beta_, spec_.bounds);
    }
    std::span<const double> probabilities() const override { return phi_; }
    std::size_t window() const override { return spec_.window; }

private:
    Sara spec_;
    double beta_;
    std::vector<double> phi_;
    std::vector<SinrEstimator> estimators_;
};

class CsmaPolicy final : public MacPolicy {
public:
    CsmaPolicy(std::string name, const Topology& t, std::vector<double> ranges, double access,
               std::size_t window, double base_range, double alpha)
        : name_(std::move(name)), topo_(t), ranges_(std::move(ranges)),
          access_(t.size(), access), window_(window), base_range_(base_range), alpha_(alpha),
          intent_(t.size()), priority_(t.size()), heard_(t.size(), 0)
    {
        rebuild_neighbors();
    }

    std::string name() const override { return name_; }

    void decide(Rng& rng, std::span<std::uint8_t> transmit) override
    {
        const std::size_t n = ranges_.size();
        for (std::size_t i = 0; i < n; ++i) {
            intent_[i] = bernoulli(rng, access_[i]) ? 1 : 0;
            priority_[i] = intent_[i] ? uniform01(rng) : -1.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            bool go = intent_[i] != 0;
            if (go) {
                for (std::uint32_t j : neighbors_[i]) {
                    if (priority_[j] > priority_[i]) {
                        go = false;
                        break;
                    }
                }
            }
            transmit[i] = go ? 1 : 0;
            heard_[i] |= transmit[i];
        }
    }

    void end_slot(std::uint64_t slot) override
    {
        if (window_ == 0 || !at_window_end(slot, window_))
            return;
        // Receivers count the transmitters they heard during the window, so
        // a wider range that silences neighbours also lowers the next count.
        const std::size_t n = ranges_.size();
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t count = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && heard_[j] && topo_.region.distance(topo_.rx[i], topo_.tx[j]) < ranges_[i])
                    ++count;
            next[i] = adaptive_sensing_range(count, base_range_, alpha_);
        }
        std::fill(heard_.begin(), heard_.end(), 0);
        if (next != ranges_) {
            ranges_ = std::move(next);
            rebuild_neighbors();
        }
    }

    std::span<const double> probabilities() const override { return access_; }
    std::size_t window() const override { return window_; }
    std::span<const double> sensing_ranges() const override { return ranges_; }

private:
    void rebuild_neighbors()
    {
        const std::size_t n = ranges_.size();
        neighbors_.assign(n, {});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && topo_.region.distance(topo_.tx[i], topo_.tx[j]) < ranges_[i])
                    neighbors_[i].push_back(static_cast<std::uint32_t>(j));
    }

    std::string name_;
    Topology topo_;
    std::vector<double> ranges_;
    std::vector<double> access_;
    std::size_t window_;
    double base_range_;
    double alpha_;
    std::vector<std::vector<std::uint32_t>> neighbors_;
    std::vector<std::uint8_t> intent_;
    std::vector<double> priority_;
    std::vector<std::uint8_t> heard_; // transmitted at least once this window
};

} // namespace

std::string policy_name(const PolicySpec& spec)
{
    return std::visit(overloaded{
                          [](const FixedAloha&) { return std::string("fixed_aloha"); },
                          [](const OptimalAloha&) { return std::string("optimal_aloha"); },
                          [](const NeighborCountAloha&) { return std::string("neighbor_aloha"); },
                          [](const Sara&) { return std::string("sara"); },
                          [](const CsmaFixed&) { return std::string("csma_fixed"); },
                          [](const CsmaAdaptive&) { return std::string("csma_adaptive"); },
                      },
                      spec);
}

PolicySpec policy_from_name(std::string_view name)
{
    if (name == "fixed_aloha")
        return FixedAloha{};
    if (name == "optimal_aloha")
        return OptimalAloha{};
    if (name == "neighbor_aloha")
        return NeighborCountAloha{};
    if (name == "sara")
        return Sara{};
    if (name == "csma_fixed")
        return CsmaFixed{};
    if (name == "csma_adaptive")
        return CsmaAdaptive{};
    throw std::invalid_argument("unknown scheme '" + std::string(name) +
                                "' (expected fixed_aloha, optimal_aloha, neighbor_aloha, sara, "
                                "csma_fixed or csma_adaptive)");
}

void validate_policy(const PolicySpec& spec)
{
    std::visit(overloaded{
                   [](const FixedAloha& s) {
                       check_probability(s.phi, "phi");
                       for (double v : s.per_pair)
                           check_probability(v, "per-pair phi");
                   },
                   [](const OptimalAloha&) {},
                   [](const NeighborCountAloha& s) {
                       if (!(s.radius > 0.0))
                           throw std::invalid_argument("neighbour radius must be > 0");
                   },
                   [](const Sara& s) {
                       s.bounds.validate();
                       check_window(s.window);
                   },
                   [](const CsmaFixed& s) {
                       if (!(s.sensing_range >= 0.0) || !std::isfinite(s.sensing_range))
                           throw std::invalid_argument("sensing range must be >= 0");
                       check_probability(s.access_prob, "access probability");
                   },
                   [](const CsmaAdaptive& s) {
                       if (!(s.base_range > 0.0) || !std::isfinite(s.base_range))
                           throw std::invalid_argument("base sensing range must be > 0");
                       check_window(s.window);
                       check_probability(s.access_prob, "access probability");
                   },
               },
               spec);
}

bool is_adaptive(const PolicySpec& spec)
{
    return std::holds_alternative<Sara>(spec) || std::holds_alternative<CsmaAdaptive>(spec);
}

double sara_update(double current, std::optional<double> gamma, double beta, const ProbBounds& bounds)
{
    if (!gamma)
        return current;
    if (!(*gamma >= 0.0))
        throw std::invalid_argument("sara_update: Gamma must be >= 0");
    if (!(beta > 0.0))
        throw std::invalid_argument("sara_update: beta must be > 0");
    return bounds.clamp(*gamma / beta);
}

double neighbor_count_phi(const Topology& t, std::size_t i, double radius)
{
    if (!(radius > 0.0))
        throw std::invalid_argument("neighbor_count_phi: radius must be > 0");
    if (i >= t.size())
        throw std::out_of_range("neighbor_count_phi: pair index out of range");
    std::size_t count = 1;
    for (std::size_t j = 0; j < t.size(); ++j)
        if (j != i && t.region.distance(t.tx[i], t.tx[j]) <= radius)
            ++count;
    return 1.0 / static_cast<double>(count);
}

double adaptive_sensing_range(std::size_t neighbors, double base_range, double alpha)
{
    if (neighbors == 0)
        return 0.0;
    return std::pow(static_cast<double>(neighbors), 1.0 / alpha) * base_range;
}

std::unique_ptr<MacPolicy> make_policy(const PolicySpec& spec, const Topology& topology,
                                       const PolicyContext& ctx)
{
    validate_policy(spec);
    const std::size_t n = topology.size();
    return std::visit(
        overloaded{
            [&](const FixedAloha& s) -> std::unique_ptr<MacPolicy> {
                std::vector<double> phi(n, s.phi);
                if (!s.per_pair.empty()) {
                    if (s.per_pair.size() != n)
                        throw std::invalid_argument("per-pair phi vector size does not match topology");
                    phi = s.per_pair;
                }
                return std::make_unique<AlohaPolicy>("fixed_aloha", std::move(phi));
            },
            [&](const OptimalAloha&) -> std::unique_ptr<MacPolicy> {
                AlohaParams p{ctx.density, ctx.link_distance, ctx.beta, ctx.alpha};
                return std::make_unique<AlohaPolicy>("optimal_aloha",
                                                     std::vector<double>(n, optimal_phi(p)));
            },
            [&](const NeighborCountAloha& s) -> std::unique_ptr<MacPolicy> {
                std::vector<double> phi(n);
                for (std::size_t i = 0; i < n; ++i)
                    phi[i] = neighbor_count_phi(topology, i, s.radius);
                return std::make_unique<AlohaPolicy>("neighbor_aloha", std::move(phi));
            },
            [&](const Sara& s) -> std::unique_ptr<MacPolicy> {
                return std::make_unique<SaraPolicy>(n, s, ctx.beta);
            },
            [&](const CsmaFixed& s) -> std::unique_ptr<MacPolicy> {
                const double r = s.sensing_range > 0.0 ? s.sensing_range : 2.0 * ctx.link_distance;
                return std::make_unique<CsmaPolicy>("csma_fixed", topology, std::vector<double>(n, r),
                                                    s.access_prob, 0, r, ctx.alpha);
            },
            [&](const CsmaAdaptive& s) -> std::unique_ptr<MacPolicy> {
                return std::make_unique<CsmaPolicy>("csma_adaptive", topology,
                                                    std::vector<double>(n, s.base_range),
                                                    s.access_prob, s.window, s.base_range, ctx.alpha);
            },
        },
        spec);
}

} // namespace sara
