#ifndef NSKR_EXPERIMENTS_HPP
#define NSKR_EXPERIMENTS_HPP

#include <string>

#include "nskr/config.hpp"

namespace nskr {

struct ExperimentOutcome {
    int exit_code = 0;        // nonzero only for invalid configuration / IO failure
    bool all_checks_pass = true;
    std::string result_dir;
};

// Executes the configured experiment, writing result.csv, summary.txt and
// plot-ready column files under <output>/<kind>-<confighash>/.
// Deterministic given (config, seed) apart from the wall_time column.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

// Re-read an existing result directory and print its summary to stdout.
int report_results(const std::string& result_dir);

}  // namespace nskr

#endif
