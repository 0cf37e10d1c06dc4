// Acceptance suite: one PASS/FAIL line per criterion.
//
//   sara_acceptance                 all criteria
//   sara_acceptance --criterion 4   a single criterion (used by ctest)

#include "sara/validation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <numeric>
#include <vector>

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    std::vector<int> ids;
    sara::ValidationOptions options;
    bool verbose = false;
    app.add_option("--criterion", ids, "Criterion id (repeatable)")
        ->check(CLI::Range(1, sara::kCriterionCount));
    app.add_option("--seed", options.seed, "Master seed");
    app.add_option("--threads", options.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("-v,--verbose", verbose, "Progress lines on stderr");
    CLI11_PARSE(app, argc, argv);

    if (ids.empty()) {
        ids.resize(sara::kCriterionCount);
        std::iota(ids.begin(), ids.end(), 1);
    }
    if (verbose)
        options.log = &std::cerr;

    int failures = 0;
    for (int id : ids) {
        const sara::CriterionResult r = sara::run_criterion(id, options);
        std::cout << sara::format_result(r) << std::endl;
        failures += r.passed ? 0 : 1;
    }
    std::cout << (ids.size() - failures) << "/" << ids.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
