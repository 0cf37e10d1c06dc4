#pragma once

#include <cmath>

namespace sara {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

// Spectral efficiency of one successful transmission at threshold beta.
inline double rate_bits(double beta_linear) { return std::log2(1.0 + beta_linear); }

} // namespace sara
