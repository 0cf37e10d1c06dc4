#pragma once

// Run settings as a flat key = value text format.
//
//   # comment
//   lambda = 0.02
//   region = 100x100
//   schemes = sara, optimal_aloha
//
// Unknown keys and out-of-range values raise ConfigError.

#include "sara/mac_schemes.hpp"
#include "sara/sim_engine.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sara {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key))
    {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct Settings {
    double lambda = 0.02;
    double beta_db = 3.0;
    double alpha = 4.0;
    double rt = 5.0;
    double width = 100.0;
    double height = 100.0;
    bool wrap = false;
    double tx_power_dbm = 30.0;
    std::optional<double> noise_dbm = -70.0; // nullopt: no noise
    bool fading = true;

    std::string scheme = "sara";
    double phi = 0.5;
    double phi_min = 0.01;
    double phi_max = 1.0;
    std::size_t window = 100;
    std::optional<double> sensing_range; // fixed CSMA; default 2 * rt
    double base_range = 10.0;
    double access_prob = 1.0;
    double neighbor_radius = 10.0;

    std::uint64_t slots = 100000;
    std::optional<std::uint64_t> warmup;
    std::size_t drops = 30;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    std::vector<double> lambdas;
    std::vector<double> betas_db;
    std::vector<std::string> schemes;

    std::string topology; // path of a topology file; empty for generated drops
    std::string out;
    std::string format = "csv";

    friend bool operator==(const Settings&, const Settings&) = default;
};

/// Every accepted key, in the order to_config_text writes them.
const std::vector<std::string>& config_keys();

/// Sets one key from its text value. Throws ConfigError naming the key.
void apply_setting(Settings& s, std::string_view key, std::string_view value);

/// Applies every line of `is` on top of `base`.
Settings parse_config(std::istream& is, Settings base = {});
/// ConfigError (key "config") if the file cannot be read.
Settings load_config(const std::string& path, Settings base = {});

/// Range checks with the accepted range in the message.
void validate_settings(const Settings& s);

/// Full text form; parse_config(to_config_text(s)) == s.
std::string to_config_text(const Settings& s);
std::string setting_value(const Settings& s, std::string_view key);

PolicySpec policy_for(const Settings& s, std::string_view scheme);
/// Validated run configuration for `s.scheme` (and the topology file if set).
RunConfig to_run_config(const Settings& s);
/// Sweep grid: lists when given, else the scalar value.
std::vector<SweepCell> to_sweep(const Settings& s);

/// $SARA_OUTPUT_DIR when set and non-empty, else ".".
std::string default_output_dir();

} // namespace sara
