#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elicit/framework.hpp"

namespace elicit::harness {

// One line per trial. Column order is part of the file contract:
// run_id,seed,mechanism,n,eps,queries,error_tv,payment,gain,ms
struct ReportRow {
    std::string run_id;
    std::uint64_t seed = 0;
    std::string mechanism;
    std::size_t n = 0;
    double eps = 0.0;
    std::size_t queries = 0;
    double error_tv = 0.0;  // metric error of the run (TV, money, or d)
    double payment = 0.0;
    double gain = 0.0;  // vs truthful, audit runs only; 0 otherwise
    double ms = 0.0;    // 0 unless timings were requested; see README
};

struct ReportSummary {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string mechanism;
    std::size_t trials = 0;
    std::size_t n = 0;
    double eps = 0.0;
    double success_rate = 0.0;  // fraction with error_tv <= eps
    double error_mean = 0.0;
    double error_p50 = 0.0;
    double error_p90 = 0.0;
    double error_max = 0.0;
    double mean_queries = 0.0;
    double max_gain = 0.0;
    double mean_payment = 0.0;
};

ReportSummary summarize(const std::vector<ReportRow>& rows, const std::string& config_hash,
                        std::uint64_t seed, const std::string& mechanism, double eps);

std::string csv_header();
std::string to_csv(const std::vector<ReportRow>& rows);
std::string to_json_summary(const ReportSummary& summary);

// Writes <stem>.csv and <stem>.json under dir. Throws elicit::Error when
// the directory cannot be written. Returns the two paths.
std::pair<std::string, std::string> emit_report(const std::vector<ReportRow>& rows,
                                                const ReportSummary& summary,
                                                const std::string& dir,
                                                const std::string& stem);

// Transcript dump for debugging runs; schema mirrors the summary file.
std::string transcript_to_json(const Transcript& transcript);

}  // namespace elicit::harness
