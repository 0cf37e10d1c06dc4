// sara: command-line front end.
//
// Exit codes: 0 success, 1 failed computation or acceptance check,
// 2 bad configuration or usage, 3 output could not be written.

#include "sara/aloha_analytic.hpp"
#include "sara/config.hpp"
#include "sara/exact_oracle.hpp"
#include "sara/report.hpp"
#include "sara/sim_engine.hpp"
#include "sara/units.hpp"
#include "sara/validation.hpp"

#include <CLI11.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOutput = 3;

struct Cli {
    std::string config_path;
    std::string replay_path;
    // Flag values are kept as text and applied through the config keys so
    // that flags and files share one parser and one set of range checks.
    std::map<std::string, std::string> overrides;
};

void add_setting_flag(CLI::App& app, Cli& cli, const std::string& flag, const std::string& key,
                      const std::string& help)
{
    app.add_option_function<std::string>(
        flag, [&cli, key](const std::string& v) { cli.overrides[key] = v; }, help);
}

void add_common_flags(CLI::App& app, Cli& cli)
{
    add_setting_flag(app, cli, "--lambda", "lambda", "Pair density per m^2 (default 0.02)");
    add_setting_flag(app, cli, "--beta-db", "beta_db", "Target SINR in dB (default 3)");
    add_setting_flag(app, cli, "--alpha", "alpha", "Pathloss exponent, > 2 (default 4)");
    add_setting_flag(app, cli, "--rt", "rt", "Link distance in m (default 5)");
    add_setting_flag(app, cli, "--region", "region", "Region WIDTHxHEIGHT in m (default 100x100)");
    app.add_flag_callback("--wrap", [&cli] { cli.overrides["wrap"] = "true"; },
                          "Torus edges (minimum-image distances)");
    add_setting_flag(app, cli, "--scheme", "scheme",
                     "fixed_aloha|optimal_aloha|neighbor_aloha|sara|csma_fixed|csma_adaptive");
    add_setting_flag(app, cli, "--slots", "slots", "Slots per drop (default 100000)");
    add_setting_flag(app, cli, "--warmup", "warmup", "Warmup slots or 'auto'");
    add_setting_flag(app, cli, "--drops", "drops", "Independent drops (default 30)");
    add_setting_flag(app, cli, "--seed", "seed", "Master seed (default 1)");
    add_setting_flag(app, cli, "--window", "window", "Averaging/update window T in slots (default 100)");
    add_setting_flag(app, cli, "--phi", "phi", "Transmit probability for fixed_aloha");
    add_setting_flag(app, cli, "--phi-min", "phi_min", "Lower probability bound (default 0.01)");
    add_setting_flag(app, cli, "--phi-max", "phi_max", "Upper probability bound (default 1)");
    add_setting_flag(app, cli, "--fading", "fading", "rayleigh or off");
    add_setting_flag(app, cli, "--noise-dbm", "noise_dbm", "Noise power in dBm or 'none'");
    add_setting_flag(app, cli, "--threads", "threads", "Worker threads for drops");
    add_setting_flag(app, cli, "--topology", "topology", "Topology file used for every drop");
    add_setting_flag(app, cli, "--out", "out", "Output file ('-' for stdout)");
    add_setting_flag(app, cli, "--format", "format", "csv or json");
}

sara::Settings resolve(const Cli& cli)
{
    sara::Settings s;
    if (!cli.replay_path.empty())
        s = sara::read_sidecar(cli.replay_path);
    if (!cli.config_path.empty())
        s = sara::load_config(cli.config_path, s);
    for (const auto& [key, value] : cli.overrides)
        sara::apply_setting(s, key, value);
    sara::validate_settings(s);
    return s;
}

std::string output_path(const sara::Settings& s, const std::string& stem)
{
    if (!s.out.empty())
        return s.out;
    return (std::filesystem::path(sara::default_output_dir()) / (stem + "." + s.format)).string();
}

// Writes `content` to the configured destination and returns the path
// ("-" for stdout).
std::string emit(const sara::Settings& s, const std::string& stem, const std::string& content)
{
    const std::string path = output_path(s, stem);
    if (path == "-")
        std::cout << content;
    else
        sara::write_text_file(path, content);
    return path;
}

int cmd_analytic(const sara::Settings& s, int points)
{
    sara::AlohaParams p{s.lambda, s.rt, sara::db_to_linear(s.beta_db), s.alpha};
    p.validate();
    std::ostringstream os;
    if (s.format == "json") {
        nlohmann::ordered_json j;
        j["rho"] = sara::rho(p.alpha);
        j["optimal_phi"] = sara::optimal_phi(p);
        j["optimal_phi_unclamped"] = sara::optimal_phi_unclamped(p);
        j["max_ase"] = sara::max_ase(p);
        j["max_ase_closed_form"] = sara::max_ase_closed_form(p);
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (int k = 0; k < points; ++k) {
            const double phi = static_cast<double>(k) / (points - 1);
            rows.push_back({{"phi", phi},
                            {"success_probability", sara::success_probability(p, phi)},
                            {"ase", sara::ase_curve(p, phi)}});
        }
        j["table"] = rows;
        os << j.dump(2) << '\n';
    }
    else {
        sara::write_ase_table_csv(os, p, points);
    }
    const std::string path = emit(s, "analytic", os.str());
    std::cerr << "rho=" << sara::rho(p.alpha) << " optimal_phi=" << sara::optimal_phi(p)
              << " max_ase=" << sara::max_ase(p) << (path == "-" ? "" : " -> " + path) << '\n';
    return 0;
}

int cmd_oracle(const sara::Settings& s, std::size_t pairs, std::size_t trials, const std::string& order)
{
    sara::Topology t;
    if (!s.topology.empty())
        t = sara::load_topology(s.topology);
    else
        t = sara::generate_topology_with_count(pairs, sara::Region{s.width, s.height, s.wrap}, s.rt, s.seed);

    sara::ChannelParams ch;
    ch.alpha = s.alpha;
    ch.tx_power = sara::dbm_to_watts(s.tx_power_dbm);
    ch.noise_power = s.noise_dbm ? sara::dbm_to_watts(*s.noise_dbm) : 0.0;
    ch.fading = sara::Fading::off;
    const double beta = sara::db_to_linear(s.beta_db);
    const sara::ProbBounds bounds{s.phi_min, s.phi_max};

    const auto table = sara::SubsetSinrTable::build(t, ch);
    sara::FixedPointOptions opt;
    opt.order = order == "async" ? sara::UpdateOrder::asynchronous : sara::UpdateOrder::synchronous;
    const auto fp = sara::fixed_point_iterate(
        table, beta, sara::ProbVector{std::vector<double>(t.size(), bounds.max), bounds}, opt);
    sara::AxiomCheckOptions ax;
    ax.bounds = bounds;
    const auto axioms = sara::check_axioms(table, beta, trials, s.seed, ax);

    std::ostringstream os;
    sara::write_trajectory_csv(os, fp);
    const std::string path = emit(s, "oracle", os.str());

    std::cout << "pairs=" << t.size() << " evaluations=" << table.evaluations()
              << " converged=" << (fp.converged ? "yes" : "no") << " iterations=" << fp.iterations
              << " residual=" << fp.residual << '\n';
    std::cout << "phi*=";
    for (std::size_t i = 0; i < fp.phi.size(); ++i)
        std::cout << (i ? "," : "") << sara::format_g6(fp.phi[i]);
    std::cout << "\nexpected_successes=" << sara::expected_success_count(table, fp.phi, beta) << '\n';
    std::cout << "axiom trials=" << axioms.trials << " positivity_failures=" << axioms.positivity_failures
              << " two_sided_failures=" << axioms.two_sided_failures
              << " scalability_failures=" << axioms.scalability_failures << '\n';
    if (path != "-")
        std::cerr << "trajectory -> " << path << '\n';
    return fp.converged ? 0 : kExitFailed;
}

int write_results(const sara::Settings& s, const std::string& stem, const std::vector<sara::RunMetrics>& rows)
{
    std::ostringstream os;
    sara::write_metrics(os, rows, s.format);
    const std::string path = emit(s, stem, os.str());
    if (path != "-") {
        sara::write_sidecar(path, s, rows);
        std::cerr << "results -> " << path << " (replay: " << sara::sidecar_path(path) << ")\n";
    }
    return 0;
}

int cmd_simulate(const sara::Settings& s, const std::string& trace_path, const std::string& phi_path)
{
    sara::RunConfig cfg = sara::to_run_config(s);
    cfg.record_trace = !trace_path.empty();
    cfg.record_pair_phi = !phi_path.empty();
    const sara::RunMetrics m = sara::run_config(cfg);
    if (!trace_path.empty()) {
        std::ostringstream os;
        sara::write_trace_csv(os, m.drops.front().trace);
        sara::write_text_file(trace_path, os.str());
    }
    if (!phi_path.empty()) {
        std::ostringstream os;
        sara::write_phi_trajectory_csv(os, m.drops.front());
        sara::write_text_file(phi_path, os.str());
    }
    return write_results(s, "simulate", {m});
}

int cmd_sweep(const sara::Settings& s)
{
    sara::RunConfig base = sara::to_run_config(s);
    // Warmup is resolved per cell from its own policy.
    base.warmup = s.warmup;
    return write_results(s, "sweep", sara::run_experiment(base, sara::to_sweep(s)));
}

int cmd_validate(const std::vector<int>& only, std::uint64_t seed, unsigned threads)
{
    std::vector<int> ids = only;
    if (ids.empty())
        for (int k = 1; k <= sara::kCriterionCount; ++k)
            ids.push_back(k);
    sara::ValidationOptions opt;
    opt.seed = seed;
    opt.threads = threads;
    opt.log = &std::cerr;
    bool all = true;
    for (int id : ids) {
        const auto r = sara::run_criterion(id, opt);
        std::cout << sara::format_result(r) << std::endl;
        all = all && r.passed;
    }
    return all ? 0 : kExitFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spatially adaptive random access: analytics, exact oracle and slotted simulation"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Cli cli;
    app.add_option("--config", cli.config_path, "key = value settings file")->check(CLI::ExistingFile);
    app.add_option("--replay", cli.replay_path, "Settings from a .meta.json sidecar")->check(CLI::ExistingFile);
    add_common_flags(app, cli);

    int points = 101;
    auto* analytic = app.add_subcommand("analytic", "Closed-form ALOHA quantities and the ASE curve");
    analytic->add_option("--points", points, "Rows in the phi table")->check(CLI::Range(2, 1000000));

    std::size_t pairs = 8, trials = 1000;
    std::string order = "sync";
    auto* oracle = app.add_subcommand("oracle", "Exact subset enumeration: fixed point and axiom checks");
    oracle->add_option("--pairs", pairs, "Pairs to generate when no topology file is given")
        ->check(CLI::Range(std::size_t{1}, sara::kMaxEnumerationPairs));
    oracle->add_option("--trials", trials, "Randomized axiom trials");
    oracle->add_option("--order", order, "Fixed-point update order")->check(CLI::IsMember({"sync", "async"}));

    std::string trace_path, phi_path;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of one scheme");
    simulate->add_option("--trace", trace_path, "Slot trace CSV of the first drop");
    simulate->add_option("--phi-trajectory", phi_path, "Per-window phi CSV of the first drop");

    auto* sweep = app.add_subcommand("sweep", "Grid of densities, thresholds and schemes");
    add_setting_flag(*sweep, cli, "--lambdas", "lambdas", "Comma-separated densities");
    add_setting_flag(*sweep, cli, "--betas-db", "betas_db", "Comma-separated thresholds in dB");
    add_setting_flag(*sweep, cli, "--schemes", "schemes", "Comma-separated scheme names");

    std::vector<int> only;
    auto* validate = app.add_subcommand("validate", "Run the acceptance checks");
    validate->add_option("--only", only, "Criterion ids to run")->delimiter(',')->check(CLI::Range(1, sara::kCriterionCount));

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const sara::Settings s = resolve(cli);
        if (*analytic)
            return cmd_analytic(s, points);
        if (*oracle)
            return cmd_oracle(s, pairs, trials, order);
        if (*simulate)
            return cmd_simulate(s, trace_path, phi_path);
        if (*sweep)
            return cmd_sweep(s);
        if (*validate)
            return cmd_validate(only, cli.overrides.count("seed") ? s.seed : sara::ValidationOptions{}.seed,
                                s.threads);
    }
    catch (const sara::ConfigError& e) {
        std::cerr << "sara: config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const sara::OutputError& e) {
        std::cerr << "sara: " << e.what() << '\n';
        return kExitOutput;
    }
    catch (const std::domain_error& e) {
        std::cerr << "sara: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::invalid_argument& e) {
        std::cerr << "sara: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception& e) {
        std::cerr << "sara: " << e.what() << '\n';
        return kExitFailed;
    }
    return 0;
}
