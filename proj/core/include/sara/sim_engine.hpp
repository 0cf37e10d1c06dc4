#pragma once

// Slotted Monte Carlo: decide -> fade -> SINR -> success -> feedback -> adapt.

#include "sara/channel.hpp"
#include "sara/geometry.hpp"
#include "sara/mac_schemes.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sara {

struct RunConfig {
    double density = 0.02; // pairs per m^2
    Region region;
    double link_distance = 5.0;
    ChannelParams channel;
    double beta_db = 3.0;
    PolicySpec policy = Sara{};
    std::uint64_t slots = 100000;
    // Slots excluded from metrics. Unset: 100 windows for adaptive
    // policies, 0 for static ones.
    std::optional<std::uint64_t> warmup;
    std::size_t drops = 30;
    std::uint64_t seed = 1;

    // When set, every drop uses this layout instead of a fresh one.
    std::optional<Topology> topology;
    // When set, drops place exactly this many pairs instead of a Poisson count.
    std::optional<std::size_t> fixed_pairs;

    // Phi snapshots are taken every `window` slots of the policy (100 for
    // static policies). Per-pair snapshots are kept only if requested.
    bool record_pair_phi = false;
    bool record_trace = false;
    // Trace covers at most this many slots from the start (every pair).
    std::uint64_t trace_slots = 1000;
    unsigned threads = 1;

    double beta() const;
    std::uint64_t effective_warmup() const;
    std::size_t snapshot_interval() const;
    /// Throws std::invalid_argument (std::domain_error for alpha <= 2).
    void validate() const;
};

struct SlotRecord {
    std::uint64_t slot = 0;
    std::uint32_t pair = 0;
    bool transmitted = false;
    bool success = false;
    double sinr_db = 0.0; // NaN when not transmitted
};

struct DropMetrics {
    std::uint64_t seed = 0;
    std::size_t pairs = 0;
    std::uint64_t measured_slots = 0;
    std::uint64_t transmissions = 0;
    std::uint64_t successes = 0;
    std::uint64_t max_slot_transmitters = 0;
    double successes_sq = 0.0;      // sum over measured slots of (successes in slot)^2
    double mean_transmitters = 0.0; // per measured slot
    double success_rate = 0.0;      // successes / transmissions, 0 if none
    double ase = 0.0;               // bit/s/Hz/m^2

    // mean_phi[w] is the network-average probability after snapshot w;
    // snapshot 0 is the initial state.
    std::vector<double> mean_phi;
    std::vector<std::vector<double>> pair_phi;
    // Adaptive policies only: every snapshot value inside the configured
    // bounds and the initial snapshot equal to the upper bound.
    bool phi_in_bounds = true;
    bool phi_initialized_at_max = true;
    std::vector<double> final_phi;
    std::vector<SlotRecord> trace;
};

struct RunMetrics {
    std::string scheme;
    double density = 0.0;
    double beta_db = 0.0;
    std::uint64_t slots = 0;
    std::uint64_t seed = 0;
    double ase_mean = 0.0;
    double ase_stderr = 0.0;
    double success_rate = 0.0; // pooled over drops
    std::vector<double> mean_phi; // averaged over drops, per snapshot
    std::vector<DropMetrics> drops;
};

/// Seed for drop `index` of a run with master seed `master`.
std::uint64_t drop_seed(std::uint64_t master, std::size_t index);

/// Topology used by a drop: cfg.topology if set, otherwise a fresh layout
/// drawn from the drop seed.
Topology drop_topology(const RunConfig& cfg, std::uint64_t seed);

DropMetrics run_drop(const RunConfig& cfg, std::uint64_t seed);
DropMetrics run_drop(const RunConfig& cfg, const Topology& topology, std::uint64_t seed);

/// Runs cfg.drops drops (in parallel when cfg.threads > 1) and aggregates.
RunMetrics run_config(const RunConfig& cfg);

struct SweepCell {
    double density = 0.02;
    double beta_db = 3.0;
    PolicySpec policy = Sara{};
};

/// One RunMetrics per cell, in sweep order. Throws std::invalid_argument
/// on an empty sweep.
std::vector<RunMetrics> run_experiment(const RunConfig& base, const std::vector<SweepCell>& sweep);

/// Grid product in the order density, beta, policy (policy fastest).
std::vector<SweepCell> make_sweep(const std::vector<double>& densities,
                                  const std::vector<double>& betas_db,
                                  const std::vector<PolicySpec>& policies);

/// Layout with group labels (0 or 1) for two-probability experiments.
struct GroupedTopology {
    Topology topology;
    std::vector<std::uint8_t> group;
};

/// `dense_pairs` transmitters packed in a square of side `cluster_side`
/// at the centre of the region (group 0) and `sparse_pairs` transmitters
/// uniform over the rest of the region (group 1).
GroupedTopology generate_clustered_topology(std::size_t dense_pairs, std::size_t sparse_pairs,
                                            double cluster_side, const Region& region,
                                            double link_distance, std::uint64_t seed);

struct SurfaceResult {
    std::vector<double> phi1;
    std::vector<double> phi2;
    // ase[a][b] for phi1[a], phi2[b]: mean and stderr over the ensemble.
    std::vector<std::vector<double>> ase_mean;
    std::vector<std::vector<double>> ase_stderr;
    std::size_t best_a = 0, best_b = 0;
    // Best cell with phi1 == phi2 (only defined when both grids share values).
    std::optional<std::pair<std::size_t, std::size_t>> best_diagonal;
};

/// Monte Carlo ASE of FixedAloha with phi1 for group 0 and phi2 for group 1,
/// per grid cell, averaged over the ensemble. Each ensemble member uses the
/// same channel seed in every cell. `cfg` supplies channel, beta, slots and
/// seed; its policy, drops and topology fields are ignored.
SurfaceResult two_phi_surface(const std::vector<GroupedTopology>& ensemble,
                              const std::vector<double>& phi1, const std::vector<double>& phi2,
                              const RunConfig& cfg);

/// CSV: slot,pair,transmitted,success,sinr_db
void write_trace_csv(std::ostream& os, const std::vector<SlotRecord>& trace);
/// CSV: window,pair,phi
void write_phi_trajectory_csv(std::ostream& os, const DropMetrics& d);
/// CSV: phi1,phi2,ase_mean,ase_stderr
void write_surface_csv(std::ostream& os, const SurfaceResult& s);

} // namespace sara
