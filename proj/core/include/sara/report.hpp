#pragma once

// Result files. Floats are written with 6 significant digits; JSON carries
// the same rounded values as CSV.

#include "sara/config.hpp"
#include "sara/sim_engine.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sara {

/// Raised when an output file cannot be created or written.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "%.6g"
std::string format_g6(double v);

inline const char* kMetricsHeader =
    "scheme,lambda,beta_db,ase_mean,ase_stderr,success_rate,drops,slots,seed";

void write_metrics_csv(std::ostream& os, const std::vector<RunMetrics>& rows);
void write_metrics_json(std::ostream& os, const std::vector<RunMetrics>& rows);
/// "csv" or "json"; std::invalid_argument otherwise.
void write_metrics(std::ostream& os, const std::vector<RunMetrics>& rows, const std::string& format);

/// Sidecar next to a result file: `<path>.meta.json` with the full settings
/// and every drop seed.
std::string sidecar_path(const std::string& result_path);
void write_sidecar(const std::string& result_path, const Settings& settings,
                   const std::vector<RunMetrics>& rows);
/// Settings stored in a sidecar. Throws ConfigError on malformed input.
Settings read_sidecar(const std::string& sidecar);

/// Writes `content` to `path`, creating parent directories. OutputError on
/// failure.
void write_text_file(const std::string& path, const std::string& content);

} // namespace sara
