#pragma once

#include <string>
#include <vector>

#include "elicit/config.hpp"
#include "elicit/report.hpp"

namespace elicit::harness {

struct ExperimentResult {
    std::vector<ReportRow> rows;
    ReportSummary summary;
};

// Runs config.trials seeded trials of the configured mechanism. Trial k
// uses the child stream derive(k) of the master seed, so growing the trial
// count never perturbs earlier trials. Deterministic: identical config and
// seed give identical rows.
ExperimentResult run_experiment(const ExperimentConfig& config);

// run_experiment plus emit_report into the configured output directory.
// Returns the written (csv, json) paths.
std::pair<std::string, std::string> run_and_emit(const ExperimentConfig& config);

}  // namespace elicit::harness
