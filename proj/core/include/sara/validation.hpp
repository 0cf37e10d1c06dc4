#pragma once

// Acceptance checks. Each criterion is self-contained and deterministic for
// a given seed; tolerances are fixed here, not configurable.

#include "sara/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sara {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationOptions {
    std::uint64_t seed = 20240611;
    unsigned threads = 1;
    std::ostream* log = nullptr; // progress lines, optional
};

inline constexpr int kCriterionCount = 9;

std::string criterion_name(int id);
/// Throws std::invalid_argument for ids outside 1..kCriterionCount.
CriterionResult run_criterion(int id, const ValidationOptions& options = {});
std::vector<CriterionResult> run_validation(const std::vector<int>& ids,
                                            const ValidationOptions& options = {});

/// "criterion <id> <PASS|FAIL> <name> (<seconds>s): <detail>"
std::string format_result(const CriterionResult& r);

struct ValidationLayout {
    Topology topology;
    std::uint64_t seed = 0; // generator seed that produced it
};

/// The 11-pair layout: the first generator seed >= 1 for which 11 pairs
/// dropped in a 30 m x 30 m square (link 5 m) leave exactly two pairs whose
/// fading-off SINR with everyone else transmitting still reaches 3 dB.
ValidationLayout validation_layout();

} // namespace sara
