#include "sara/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sara {

namespace {

// Value as it appears in the files: rounded to 6 significant digits.
double rounded(double v)
{
    return std::stod(format_g6(v));
}

} // namespace

std::string format_g6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_metrics_csv(std::ostream& os, const std::vector<RunMetrics>& rows)
{
    os << kMetricsHeader << '\n';
    for (const auto& r : rows) {
        os << r.scheme << ',' << format_g6(r.density) << ',' << format_g6(r.beta_db) << ','
           << format_g6(r.ase_mean) << ',' << format_g6(r.ase_stderr) << ','
           << format_g6(r.success_rate) << ',' << r.drops.size() << ',' << r.slots << ',' << r.seed
           << '\n';
    }
}

void write_metrics_json(std::ostream& os, const std::vector<RunMetrics>& rows)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["scheme"] = r.scheme;
        row["lambda"] = rounded(r.density);
        row["beta_db"] = rounded(r.beta_db);
        row["ase_mean"] = rounded(r.ase_mean);
        row["ase_stderr"] = rounded(r.ase_stderr);
        row["success_rate"] = rounded(r.success_rate);
        row["drops"] = r.drops.size();
        row["slots"] = r.slots;
        row["seed"] = r.seed;
        out.push_back(std::move(row));
    }
    os << out.dump(2) << '\n';
}

void write_metrics(std::ostream& os, const std::vector<RunMetrics>& rows, const std::string& format)
{
    if (format == "csv")
        write_metrics_csv(os, rows);
    else if (format == "json")
        write_metrics_json(os, rows);
    else
        throw std::invalid_argument("unknown format '" + format + "' (expected csv or json)");
}

std::string sidecar_path(const std::string& result_path)
{
    return result_path + ".meta.json";
}

void write_sidecar(const std::string& result_path, const Settings& settings,
                   const std::vector<RunMetrics>& rows)
{
    nlohmann::ordered_json meta;
    meta["result"] = std::filesystem::path(result_path).filename().string();
    nlohmann::ordered_json cfg;
    for (const auto& key : config_keys())
        cfg[key] = setting_value(settings, key);
    meta["settings"] = cfg;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json c;
        c["scheme"] = r.scheme;
        c["lambda"] = r.density;
        c["beta_db"] = r.beta_db;
        std::vector<std::uint64_t> seeds;
        for (const auto& d : r.drops)
            seeds.push_back(d.seed);
        c["drop_seeds"] = seeds;
        cells.push_back(std::move(c));
    }
    meta["cells"] = cells;
    write_text_file(sidecar_path(result_path), meta.dump(2) + "\n");
}

Settings read_sidecar(const std::string& sidecar)
{
    std::ifstream in(sidecar);
    if (!in)
        throw ConfigError("replay", "cannot read '" + sidecar + "'");
    nlohmann::json meta;
    try {
        in >> meta;
    }
    catch (const nlohmann::json::exception& e) {
        throw ConfigError("replay", std::string("malformed sidecar: ") + e.what());
    }
    if (!meta.contains("settings") || !meta["settings"].is_object())
        throw ConfigError("replay", "sidecar has no settings object");
    Settings s;
    for (const auto& [key, value] : meta["settings"].items()) {
        if (!value.is_string())
            throw ConfigError(key, "sidecar value must be a string");
        apply_setting(s, key, value.get<std::string>());
    }
    return s;
}

void write_text_file(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path p(path);
    if (p.has_parent_path())
        fs::create_directories(p.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw OutputError("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out)
        throw OutputError("write failed for '" + path + "'");
}

} // namespace sara
