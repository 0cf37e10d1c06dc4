#pragma once

#include "sara/exact_oracle.hpp"
#include "sara/geometry.hpp"
#include "sara/random.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sara {

// Default carrier-sensing / neighbour-counting radius, metres.
inline constexpr double kDefaultSensingRange = 10.0;

/// Every pair transmits with `phi`, or with per_pair[i] when given.
struct FixedAloha {
    double phi = 0.5;
    std::vector<double> per_pair;
};

/// Every pair transmits with the closed-form optimum for the configured density.
struct OptimalAloha {};

/// phi_i = 1 / (transmitters within `radius` of transmitter i, itself included).
struct NeighborCountAloha {
    double radius = kDefaultSensingRange;
};

/// Spatially adaptive random access: start at bounds.max, then every
/// `window` slots set phi = clamp(Gamma / beta) from the receiver's
/// time-averaged SINR.
struct Sara {
    ProbBounds bounds;
    std::size_t window = 100;
};

/// Slotted CSMA with one sensing range for everybody. A range of 0 means
/// twice the link distance.
struct CsmaFixed {
    double sensing_range = 0.0;
    double access_prob = 1.0;
};

/// Slotted CSMA whose per-pair range is n^(1/alpha) * base_range, with n the
/// number of other transmitters inside the receiver's current range,
/// re-evaluated every `window` slots.
struct CsmaAdaptive {
    double base_range = kDefaultSensingRange;
    std::size_t window = 100;
    double access_prob = 1.0;
};

using PolicySpec =
    std::variant<FixedAloha, OptimalAloha, NeighborCountAloha, Sara, CsmaFixed, CsmaAdaptive>;

/// Stable identifiers: fixed_aloha, optimal_aloha, neighbor_aloha, sara,
/// csma_fixed, csma_adaptive.
std::string policy_name(const PolicySpec& spec);
/// Default-parameter policy for a name; throws std::invalid_argument.
PolicySpec policy_from_name(std::string_view name);
/// Throws std::invalid_argument for out-of-range parameters.
void validate_policy(const PolicySpec& spec);
bool is_adaptive(const PolicySpec& spec);

/// What a policy may know about the network at initialization.
struct PolicyContext {
    double density = 0.02;
    double beta = 1.9952623149688795;
    double alpha = 4.0;
    double link_distance = 5.0;
};

struct Feedback {
    bool transmitted = false;
    bool success = false;
    std::optional<double> measured_sir;
};

/// Per-slot transmission rule for the whole network. Slots are synchronous:
/// decide() sees only state produced by earlier slots.
class MacPolicy {
public:
    virtual ~MacPolicy() = default;

    virtual std::string name() const = 0;
    /// Writes 1 to transmit[i] if pair i transmits this slot, else 0.
    virtual void decide(Rng& rng, std::span<std::uint8_t> transmit) = 0;
    /// Outcome for a pair that transmitted this slot.
    virtual void feedback(std::size_t /*pair*/, const Feedback& /*fb*/) {}
    /// Called once after all feedback for `slot` (0-based) is delivered.
    virtual void end_slot(std::uint64_t /*slot*/) {}
    /// Current per-pair transmit probabilities (access probability for CSMA).
    virtual std::span<const double> probabilities() const = 0;
    /// Adaptation period in slots, 0 for static rules.
    virtual std::size_t window() const { return 0; }
    /// Per-pair carrier-sensing ranges; empty for ALOHA variants.
    virtual std::span<const double> sensing_ranges() const { return {}; }
};

std::unique_ptr<MacPolicy> make_policy(const PolicySpec& spec, const Topology& topology,
                                       const PolicyContext& ctx);

/// clamp(Gamma / beta) into the bounds; `current` when there is no estimate.
double sara_update(double current, std::optional<double> gamma, double beta,
                   const ProbBounds& bounds);

double neighbor_count_phi(const Topology& t, std::size_t i, double radius);

/// n^(1/alpha) * base_range; 0 when n == 0.
double adaptive_sensing_range(std::size_t neighbors, double base_range, double alpha);

} // namespace sara
