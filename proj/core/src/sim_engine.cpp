#include "sara/sim_engine.hpp"

#include "sara/units.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <variant>

namespace sara {

namespace {

constexpr std::size_t kStaticSnapshotInterval = 100;
constexpr std::uint64_t kWarmupWindows = 100;

std::optional<ProbBounds> sara_bounds(const PolicySpec& spec)
{
    if (const auto* s = std::get_if<Sara>(&spec))
        return s->bounds;
    return std::nullopt;
}

double mean_of(std::span<const double> v)
{
    if (v.empty())
        return 0.0;
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard error of the mean; 0 for fewer than two values.
double stderr_of(const std::vector<double>& v)
{
    if (v.size() < 2)
        return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

Point place_receiver(Point tx, double link_distance, const Region& region, Rng& rng)
{
    const double angle = uniform01(rng) * 2.0 * std::numbers::pi;
    return region.wrap_point(
        {tx.x + link_distance * std::cos(angle), tx.y + link_distance * std::sin(angle)});
}

} // namespace

double RunConfig::beta() const
{
    return db_to_linear(beta_db);
}

std::uint64_t RunConfig::effective_warmup() const
{
    if (warmup)
        return *warmup;
    if (is_adaptive(policy))
        return kWarmupWindows * snapshot_interval();
    return 0;
}

std::size_t RunConfig::snapshot_interval() const
{
    if (const auto* s = std::get_if<Sara>(&policy))
        return s->window;
    if (const auto* s = std::get_if<CsmaAdaptive>(&policy))
        return s->window;
    return kStaticSnapshotInterval;
}

void RunConfig::validate() const
{
    channel.validate();
    region.validate();
    validate_policy(policy);
    if (!(density > 0.0) || !std::isfinite(density))
        throw std::invalid_argument("lambda must be > 0");
    if (!(link_distance > 0.0) || !(link_distance < 0.5 * std::min(region.width, region.height)))
        throw std::invalid_argument("link distance must be > 0 and below half the region side");
    if (!std::isfinite(beta_db))
        throw std::invalid_argument("beta_db must be finite");
    if (drops < 1)
        throw std::invalid_argument("drops must be >= 1");
    if (!(slots > effective_warmup()))
        throw std::invalid_argument("slots must exceed warmup (" + std::to_string(effective_warmup()) +
                                    ")");
}

std::uint64_t drop_seed(std::uint64_t master, std::size_t index)
{
    return derive_seed(derive_seed(master, Stream::drop), index);
}

Topology drop_topology(const RunConfig& cfg, std::uint64_t seed)
{
    if (cfg.topology)
        return *cfg.topology;
    const std::uint64_t s = derive_seed(seed, Stream::topology);
    if (cfg.fixed_pairs)
        return generate_topology_with_count(*cfg.fixed_pairs, cfg.region, cfg.link_distance, s);
    return generate_topology(cfg.density, cfg.region, cfg.link_distance, s);
}

DropMetrics run_drop(const RunConfig& cfg, std::uint64_t seed)
{
    return run_drop(cfg, drop_topology(cfg, seed), seed);
}

DropMetrics run_drop(const RunConfig& cfg, const Topology& topo, std::uint64_t seed)
{
    cfg.validate();
    const std::uint64_t warmup = cfg.effective_warmup();
    const std::size_t n = topo.size();
    const double beta = cfg.beta();

    DropMetrics m;
    m.seed = seed;
    m.pairs = n;
    m.measured_slots = cfg.slots - warmup;
    if (n == 0)
        return m;

    const PolicyContext ctx{cfg.density, beta, cfg.channel.alpha, topo.link_distance};
    auto policy = make_policy(cfg.policy, topo, ctx);
    const GainMatrix mean = mean_gains(topo, cfg.channel);
    std::vector<double> proxy(n);
    for (std::size_t i = 0; i < n; ++i)
        proxy[i] = snr_proxy(mean, i, cfg.channel);

    Rng mac_rng(derive_seed(seed, Stream::mac));
    Rng chan_rng(derive_seed(seed, Stream::channel));

    const auto bounds = sara_bounds(cfg.policy);
    const std::size_t interval = cfg.snapshot_interval();
    auto snapshot = [&] {
        const auto phi = policy->probabilities();
        m.mean_phi.push_back(mean_of(phi));
        if (cfg.record_pair_phi)
            m.pair_phi.emplace_back(phi.begin(), phi.end());
        if (bounds)
            for (double v : phi)
                if (!(v >= bounds->min && v <= bounds->max))
                    m.phi_in_bounds = false;
    };
    snapshot();
    if (bounds)
        for (double v : policy->probabilities())
            if (v != bounds->max)
                m.phi_initialized_at_max = false;

    std::vector<std::uint8_t> transmit(n);
    std::vector<std::uint32_t> active;
    active.reserve(n);
    std::vector<double> sinr(n);
    const std::uint64_t trace_end = cfg.record_trace ? std::min(cfg.trace_slots, cfg.slots) : 0;

    for (std::uint64_t slot = 0; slot < cfg.slots; ++slot) {
        policy->decide(mac_rng, transmit);
        active.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (transmit[i])
                active.push_back(static_cast<std::uint32_t>(i));
        active_sinrs(active, mean, cfg.channel, chan_rng, std::span(sinr.data(), active.size()));

        std::uint64_t ok = 0;
        for (std::size_t k = 0; k < active.size(); ++k) {
            const std::size_t i = active[k];
            const bool success = sinr[k] >= beta;
            ok += success;
            const double measured = std::isinf(sinr[k]) ? proxy[i] : sinr[k];
            policy->feedback(i, Feedback{true, success, measured});
        }
        policy->end_slot(slot);

        if (slot < trace_end) {
            std::size_t k = 0;
            for (std::size_t i = 0; i < n; ++i) {
                SlotRecord r{slot, static_cast<std::uint32_t>(i), false, false,
                             std::numeric_limits<double>::quiet_NaN()};
                if (k < active.size() && active[k] == i) {
                    r.transmitted = true;
                    r.success = sinr[k] >= beta;
                    r.sinr_db = linear_to_db(sinr[k]);
                    ++k;
                }
                m.trace.push_back(r);
            }
        }
        if (slot >= warmup) {
            m.transmissions += active.size();
            m.successes += ok;
            m.successes_sq += static_cast<double>(ok) * static_cast<double>(ok);
            m.max_slot_transmitters = std::max<std::uint64_t>(m.max_slot_transmitters, active.size());
        }
        if ((slot + 1) % interval == 0)
            snapshot();
    }

    const auto phi = policy->probabilities();
    m.final_phi.assign(phi.begin(), phi.end());
    m.mean_transmitters = static_cast<double>(m.transmissions) / static_cast<double>(m.measured_slots);
    m.success_rate = m.transmissions == 0
                         ? 0.0
                         : static_cast<double>(m.successes) / static_cast<double>(m.transmissions);
    m.ase = m.success_rate * m.mean_transmitters * rate_bits(beta) / topo.region.area();
    return m;
}

RunMetrics run_config(const RunConfig& cfg)
{
    cfg.validate();
    RunMetrics r;
    r.scheme = policy_name(cfg.policy);
    r.density = cfg.density;
    r.beta_db = cfg.beta_db;
    r.slots = cfg.slots;
    r.seed = cfg.seed;
    r.drops.resize(cfg.drops);

    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.drops)));
    if (workers == 1) {
        for (std::size_t d = 0; d < cfg.drops; ++d)
            r.drops[d] = run_drop(cfg, drop_seed(cfg.seed, d));
    }
    else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t d = next++; d < cfg.drops; d = next++)
                        r.drops[d] = run_drop(cfg, drop_seed(cfg.seed, d));
                }
                catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool)
            t.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    std::vector<double> ase;
    std::uint64_t tx = 0, ok = 0;
    for (const auto& d : r.drops) {
        ase.push_back(d.ase);
        tx += d.transmissions;
        ok += d.successes;
    }
    r.ase_mean = mean_of(ase);
    r.ase_stderr = stderr_of(ase);
    r.success_rate = tx == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(tx);

    const std::size_t snaps = r.drops.front().mean_phi.size();
    r.mean_phi.assign(snaps, 0.0);
    std::size_t counted = 0;
    for (const auto& d : r.drops) {
        if (d.mean_phi.size() != snaps)
            continue; // empty topology
        ++counted;
        for (std::size_t w = 0; w < snaps; ++w)
            r.mean_phi[w] += d.mean_phi[w];
    }
    for (double& v : r.mean_phi)
        v = counted ? v / static_cast<double>(counted) : 0.0;
    return r;
}

std::vector<SweepCell> make_sweep(const std::vector<double>& densities,
                                  const std::vector<double>& betas_db,
                                  const std::vector<PolicySpec>& policies)
{
    std::vector<SweepCell> cells;
    for (double l : densities)
        for (double b : betas_db)
            for (const auto& p : policies)
                cells.push_back({l, b, p});
    return cells;
}

std::vector<RunMetrics> run_experiment(const RunConfig& base, const std::vector<SweepCell>& sweep)
{
    if (sweep.empty())
        throw std::invalid_argument("run_experiment: empty sweep");
    std::vector<RunMetrics> out;
    out.reserve(sweep.size());
    for (const auto& cell : sweep) {
        RunConfig cfg = base;
        cfg.density = cell.density;
        cfg.beta_db = cell.beta_db;
        cfg.policy = cell.policy;
        out.push_back(run_config(cfg));
    }
    return out;
}

GroupedTopology generate_clustered_topology(std::size_t dense_pairs, std::size_t sparse_pairs,
                                            double cluster_side, const Region& region,
                                            double link_distance, std::uint64_t seed)
{
    region.validate();
    if (!(cluster_side > 0.0 && cluster_side < std::min(region.width, region.height)))
        throw std::invalid_argument("cluster side must be positive and smaller than the region");
    if (!(link_distance > 0.0))
        throw std::invalid_argument("link distance must be > 0");

    Rng rng(derive_seed(seed, Stream::topology));
    const double x0 = 0.5 * (region.width - cluster_side);
    const double y0 = 0.5 * (region.height - cluster_side);
    auto in_cluster = [&](Point p) {
        return p.x >= x0 && p.x < x0 + cluster_side && p.y >= y0 && p.y < y0 + cluster_side;
    };

    GroupedTopology g;
    g.topology.link_distance = link_distance;
    g.topology.region = region;
    auto add = [&](Point tx, std::uint8_t group) {
        g.topology.tx.push_back(tx);
        g.topology.rx.push_back(place_receiver(tx, link_distance, region, rng));
        g.group.push_back(group);
    };
    for (std::size_t k = 0; k < dense_pairs; ++k)
        add({x0 + cluster_side * uniform01(rng), y0 + cluster_side * uniform01(rng)}, 0);
    for (std::size_t k = 0; k < sparse_pairs; ++k) {
        Point p;
        do {
            p = {region.width * uniform01(rng), region.height * uniform01(rng)};
        } while (in_cluster(p));
        add(p, 1);
    }
    return g;
}

SurfaceResult two_phi_surface(const std::vector<GroupedTopology>& ensemble,
                              const std::vector<double>& phi1, const std::vector<double>& phi2,
                              const RunConfig& cfg)
{
    if (ensemble.empty() || phi1.empty() || phi2.empty())
        throw std::invalid_argument("two_phi_surface: empty ensemble or grid");
    for (const auto& g : ensemble) {
        if (g.group.size() != g.topology.size())
            throw std::invalid_argument("two_phi_surface: every pair needs a group label");
        for (auto label : g.group)
            if (label > 1)
                throw std::invalid_argument("two_phi_surface: group labels must be 0 or 1");
    }

    SurfaceResult s;
    s.phi1 = phi1;
    s.phi2 = phi2;
    s.ase_mean.assign(phi1.size(), std::vector<double>(phi2.size()));
    s.ase_stderr = s.ase_mean;

    RunConfig c = cfg;
    c.warmup = 0;
    c.record_trace = false;
    c.record_pair_phi = false;
    for (std::size_t a = 0; a < phi1.size(); ++a) {
        for (std::size_t b = 0; b < phi2.size(); ++b) {
            std::vector<double> ase;
            for (std::size_t e = 0; e < ensemble.size(); ++e) {
                const auto& g = ensemble[e];
                FixedAloha fa;
                fa.phi = phi1[a];
                fa.per_pair.resize(g.group.size());
                for (std::size_t i = 0; i < g.group.size(); ++i)
                    fa.per_pair[i] = g.group[i] == 0 ? phi1[a] : phi2[b];
                c.policy = fa;
                ase.push_back(run_drop(c, g.topology, drop_seed(cfg.seed, e)).ase);
            }
            s.ase_mean[a][b] = mean_of(ase);
            s.ase_stderr[a][b] = stderr_of(ase);
            if (s.ase_mean[a][b] > s.ase_mean[s.best_a][s.best_b])
                s.best_a = a, s.best_b = b;
            if (phi1[a] == phi2[b] &&
                (!s.best_diagonal ||
                 s.ase_mean[a][b] > s.ase_mean[s.best_diagonal->first][s.best_diagonal->second]))
                s.best_diagonal = std::pair{a, b};
        }
    }
    return s;
}

void write_trace_csv(std::ostream& os, const std::vector<SlotRecord>& trace)
{
    os << "slot,pair,transmitted,success,sinr_db\n";
    for (const auto& r : trace) {
        os << r.slot << ',' << r.pair << ',' << int(r.transmitted) << ',' << int(r.success) << ',';
        if (r.transmitted)
            os << r.sinr_db;
        os << '\n';
    }
}

void write_phi_trajectory_csv(std::ostream& os, const DropMetrics& d)
{
    os << "window,pair,phi\n";
    for (std::size_t w = 0; w < d.pair_phi.size(); ++w)
        for (std::size_t i = 0; i < d.pair_phi[w].size(); ++i)
            os << w << ',' << i << ',' << d.pair_phi[w][i] << '\n';
}

void write_surface_csv(std::ostream& os, const SurfaceResult& s)
{
    os << "phi1,phi2,ase_mean,ase_stderr\n";
    for (std::size_t a = 0; a < s.phi1.size(); ++a)
        for (std::size_t b = 0; b < s.phi2.size(); ++b)
            os << s.phi1[a] << ',' << s.phi2[b] << ',' << s.ase_mean[a][b] << ','
               << s.ase_stderr[a][b] << '\n';
}

} // namespace sara
