#include "sara/config.hpp"

#include "sara/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sara {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view v)
{
    v = trim(v);
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(std::string(key), "expected a finite number, got '" + std::string(v) + "'");
    return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v)
{
    v = trim(v);
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        // Accept integral values written in exponent form, e.g. 1e5.
        double d = 0.0;
        try {
            d = to_double(key, v);
        }
        catch (const ConfigError&) {
            throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(v) + "'");
        }
        if (d < 0 || d != std::floor(d) || d > 9.0e18)
            throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(v) + "'");
        return static_cast<std::uint64_t>(d);
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view v)
{
    v = trim(v);
    if (v == "1" || v == "true" || v == "on" || v == "yes")
        return true;
    if (v == "0" || v == "false" || v == "off" || v == "no")
        return false;
    throw ConfigError(std::string(key), "expected true/false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> split_list(std::string_view v)
{
    std::vector<std::string_view> items;
    v = trim(v);
    if (v.empty())
        return items;
    std::size_t start = 0;
    while (true) {
        const auto comma = v.find(',', start);
        items.push_back(trim(v.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return items;
}

std::vector<double> to_double_list(std::string_view key, std::string_view v)
{
    std::vector<double> out;
    for (auto item : split_list(v))
        out.push_back(to_double(key, item));
    return out;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k)
        s += (k ? "," : "") + fmt(v[k]);
    return s;
}

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k)
        s += (k ? "," : "") + v[k];
    return s;
}

struct Field {
    std::function<void(Settings&, std::string_view)> set;
    std::function<std::string(const Settings&)> get;
};

using FieldTable = std::vector<std::pair<std::string, Field>>;

template <class T>
Field number_field(T Settings::*member)
{
    return {[member](Settings& s, std::string_view v) {
                if constexpr (std::is_floating_point_v<T>)
                    s.*member = to_double("", v);
                else
                    s.*member = static_cast<T>(to_uint("", v));
            },
            [member](const Settings& s) {
                if constexpr (std::is_floating_point_v<T>)
                    return fmt(s.*member);
                else
                    return std::to_string(s.*member);
            }};
}

Field string_field(std::string Settings::*member)
{
    return {[member](Settings& s, std::string_view v) { s.*member = std::string(trim(v)); },
            [member](const Settings& s) { return s.*member; }};
}

const FieldTable& fields()
{
    static const FieldTable table = {
        {"lambda", number_field(&Settings::lambda)},
        {"beta_db", number_field(&Settings::beta_db)},
        {"alpha", number_field(&Settings::alpha)},
        {"rt", number_field(&Settings::rt)},
        {"region",
         {[](Settings& s, std::string_view v) {
              v = trim(v);
              const auto x = v.find_first_of("xX");
              if (x == std::string_view::npos)
                  throw ConfigError("", "expected WIDTHxHEIGHT, got '" + std::string(v) + "'");
              s.width = to_double("", v.substr(0, x));
              s.height = to_double("", v.substr(x + 1));
          },
          [](const Settings& s) { return fmt(s.width) + "x" + fmt(s.height); }}},
        {"wrap",
         {[](Settings& s, std::string_view v) { s.wrap = to_bool("", v); },
          [](const Settings& s) { return std::string(s.wrap ? "true" : "false"); }}},
        {"tx_power_dbm", number_field(&Settings::tx_power_dbm)},
        {"noise_dbm",
         {[](Settings& s, std::string_view v) {
              if (trim(v) == "none")
                  s.noise_dbm.reset();
              else
                  s.noise_dbm = to_double("", v);
          },
          [](const Settings& s) { return s.noise_dbm ? fmt(*s.noise_dbm) : std::string("none"); }}},
        {"fading",
         {[](Settings& s, std::string_view v) {
              v = trim(v);
              s.fading = v == "rayleigh" ? true : to_bool("", v);
          },
          [](const Settings& s) { return std::string(s.fading ? "rayleigh" : "off"); }}},
        {"scheme", string_field(&Settings::scheme)},
        {"phi", number_field(&Settings::phi)},
        {"phi_min", number_field(&Settings::phi_min)},
        {"phi_max", number_field(&Settings::phi_max)},
        {"window", number_field(&Settings::window)},
        {"sensing_range",
         {[](Settings& s, std::string_view v) {
              if (trim(v) == "auto")
                  s.sensing_range.reset();
              else
                  s.sensing_range = to_double("", v);
          },
          [](const Settings& s) { return s.sensing_range ? fmt(*s.sensing_range) : std::string("auto"); }}},
        {"base_range", number_field(&Settings::base_range)},
        {"access_prob", number_field(&Settings::access_prob)},
        {"neighbor_radius", number_field(&Settings::neighbor_radius)},
        {"slots", number_field(&Settings::slots)},
        {"warmup",
         {[](Settings& s, std::string_view v) {
              if (trim(v) == "auto")
                  s.warmup.reset();
              else
                  s.warmup = to_uint("", v);
          },
          [](const Settings& s) { return s.warmup ? std::to_string(*s.warmup) : std::string("auto"); }}},
        {"drops", number_field(&Settings::drops)},
        {"seed", number_field(&Settings::seed)},
        {"threads", number_field(&Settings::threads)},
        {"lambdas",
         {[](Settings& s, std::string_view v) { s.lambdas = to_double_list("", v); },
          [](const Settings& s) { return join(s.lambdas); }}},
        {"betas_db",
         {[](Settings& s, std::string_view v) { s.betas_db = to_double_list("", v); },
          [](const Settings& s) { return join(s.betas_db); }}},
        {"schemes",
         {[](Settings& s, std::string_view v) {
              s.schemes.clear();
              for (auto item : split_list(v))
                  s.schemes.emplace_back(item);
          },
          [](const Settings& s) { return join(s.schemes); }}},
        {"topology", string_field(&Settings::topology)},
        {"out", string_field(&Settings::out)},
        {"format", string_field(&Settings::format)},
    };
    return table;
}

const Field* find_field(std::string_view key)
{
    for (const auto& [name, f] : fields())
        if (name == key)
            return &f;
    return nullptr;
}

void require(bool ok, const char* key, const std::string& range)
{
    if (!ok)
        throw ConfigError(key, "out of range, accepted: " + range);
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, f] : fields())
            k.push_back(name);
        return k;
    }();
    return keys;
}

void apply_setting(Settings& s, std::string_view key, std::string_view value)
{
    const Field* f = find_field(key);
    if (!f)
        throw ConfigError(std::string(key), "unknown key");
    try {
        f->set(s, value);
    }
    catch (const ConfigError& e) {
        throw ConfigError(std::string(key), e.what());
    }
}

Settings parse_config(std::istream& is, Settings base)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view v = line;
        if (const auto hash = v.find('#'); hash != std::string_view::npos)
            v = v.substr(0, hash);
        v = trim(v);
        if (v.empty())
            continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        apply_setting(base, trim(v.substr(0, eq)), trim(v.substr(eq + 1)));
    }
    return base;
}

Settings load_config(const std::string& path, Settings base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot read '" + path + "'");
    return parse_config(in, std::move(base));
}

void validate_settings(const Settings& s)
{
    require(s.lambda > 0.0, "lambda", "> 0 pairs/m^2");
    if (!(s.alpha > 2.0))
        throw ConfigError("alpha", "out of range, accepted: > 2 (rho(alpha) has a pole at 2)");
    require(s.width > 0.0 && s.height > 0.0, "region", "WIDTHxHEIGHT with both > 0 m");
    require(s.rt > 0.0 && s.rt < 0.5 * std::min(s.width, s.height), "rt",
            "(0, min(width, height) / 2) m");
    require(s.phi > 0.0 && s.phi <= 1.0, "phi", "(0, 1]");
    require(s.phi_min > 0.0 && s.phi_min <= 1.0, "phi_min", "(0, 1] and <= phi_max");
    require(s.phi_max > 0.0 && s.phi_max <= 1.0, "phi_max", "(0, 1] and >= phi_min");
    require(s.phi_min <= s.phi_max, "phi_min", "(0, 1] and <= phi_max");
    require(s.window >= 1, "window", ">= 1 slot");
    require(!s.sensing_range || *s.sensing_range > 0.0, "sensing_range", "> 0 m or auto");
    require(s.base_range > 0.0, "base_range", "> 0 m");
    require(s.access_prob > 0.0 && s.access_prob <= 1.0, "access_prob", "(0, 1]");
    require(s.neighbor_radius > 0.0, "neighbor_radius", "> 0 m");
    require(s.drops >= 1, "drops", ">= 1");
    require(s.slots >= 1, "slots", ">= 1");
    require(s.threads >= 1, "threads", ">= 1");
    require(s.format == "csv" || s.format == "json", "format", "csv or json");
    for (double l : s.lambdas)
        require(l > 0.0, "lambdas", "comma-separated values > 0");

    auto check_scheme = [](const std::string& name, const char* key) {
        try {
            policy_from_name(name);
        }
        catch (const std::invalid_argument&) {
            throw ConfigError(key, "out of range, accepted: fixed_aloha, optimal_aloha, "
                                   "neighbor_aloha, sara, csma_fixed, csma_adaptive");
        }
    };
    check_scheme(s.scheme, "scheme");
    for (const auto& name : s.schemes)
        check_scheme(name, "schemes");

    for (const auto& name : s.schemes.empty() ? std::vector<std::string>{s.scheme} : s.schemes) {
        const bool adaptive = is_adaptive(policy_from_name(name));
        const std::uint64_t warm = s.warmup ? *s.warmup : (adaptive ? 100 * s.window : 0);
        if (!(s.slots > warm))
            throw ConfigError("slots", "out of range, accepted: > warmup (" + std::to_string(warm) +
                                           " slots for " + name + ")");
    }
}

std::string setting_value(const Settings& s, std::string_view key)
{
    const Field* f = find_field(key);
    if (!f)
        throw ConfigError(std::string(key), "unknown key");
    return f->get(s);
}

std::string to_config_text(const Settings& s)
{
    std::string text;
    for (const auto& [name, f] : fields())
        text += name + " = " + f.get(s) + "\n";
    return text;
}

PolicySpec policy_for(const Settings& s, std::string_view scheme)
{
    PolicySpec spec = policy_from_name(scheme);
    if (auto* p = std::get_if<FixedAloha>(&spec))
        p->phi = s.phi;
    else if (auto* p = std::get_if<NeighborCountAloha>(&spec))
        p->radius = s.neighbor_radius;
    else if (auto* p = std::get_if<Sara>(&spec)) {
        p->bounds = {s.phi_min, s.phi_max};
        p->window = s.window;
    }
    else if (auto* p = std::get_if<CsmaFixed>(&spec)) {
        p->sensing_range = s.sensing_range.value_or(2.0 * s.rt);
        p->access_prob = s.access_prob;
    }
    else if (auto* p = std::get_if<CsmaAdaptive>(&spec)) {
        p->base_range = s.base_range;
        p->window = s.window;
        p->access_prob = s.access_prob;
    }
    return spec;
}

RunConfig to_run_config(const Settings& s)
{
    validate_settings(s);
    RunConfig c;
    c.density = s.lambda;
    c.region = {s.width, s.height, s.wrap};
    c.link_distance = s.rt;
    c.channel.alpha = s.alpha;
    c.channel.tx_power = dbm_to_watts(s.tx_power_dbm);
    c.channel.noise_power = s.noise_dbm ? dbm_to_watts(*s.noise_dbm) : 0.0;
    c.channel.fading = s.fading ? Fading::rayleigh : Fading::off;
    c.beta_db = s.beta_db;
    c.policy = policy_for(s, s.schemes.empty() ? s.scheme : s.schemes.front());
    c.slots = s.slots;
    c.warmup = s.warmup;
    c.drops = s.drops;
    c.seed = s.seed;
    c.threads = s.threads;
    if (!s.topology.empty()) {
        try {
            c.topology = load_topology(s.topology);
        }
        catch (const std::exception& e) {
            throw ConfigError("topology", e.what());
        }
        c.link_distance = c.topology->link_distance;
        c.region = c.topology->region;
    }
    try {
        c.validate();
    }
    catch (const std::exception& e) {
        throw ConfigError("config", e.what());
    }
    return c;
}

std::vector<SweepCell> to_sweep(const Settings& s)
{
    validate_settings(s);
    const auto lambdas = s.lambdas.empty() ? std::vector<double>{s.lambda} : s.lambdas;
    const auto betas = s.betas_db.empty() ? std::vector<double>{s.beta_db} : s.betas_db;
    std::vector<PolicySpec> policies;
    for (const auto& name : s.schemes.empty() ? std::vector<std::string>{s.scheme} : s.schemes)
        policies.push_back(policy_for(s, name));
    return make_sweep(lambdas, betas, policies);
}

std::string default_output_dir()
{
    const char* env = std::getenv("SARA_OUTPUT_DIR");
    return env && *env ? std::string(env) : std::string(".");
}

} // namespace sara
