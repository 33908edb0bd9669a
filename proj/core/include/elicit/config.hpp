#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace elicit::harness {

// Agent behavior requested for a run.
struct AgentConfig {
    enum class Kind { Truthful, Misreport, Sequences };
    Kind kind = Kind::Truthful;
    // Empty type means "draw a fresh one per trial".
    std::vector<double> type;
    std::vector<double> report;  // Misreport only
    std::string bits;            // Sequences only, e.g. "0101"
};

struct LotteryConfig {
    double low = 0.05;
    double high = 0.95;
    double p_high = 0.5;
};

struct ScheduleConfig {
    enum class Kind { Geometric, Uniform, Explicit };
    Kind kind = Kind::Geometric;
    double safety = 0.9;            // Geometric
    std::vector<double> log_p;      // Explicit
};

struct GroundTruthConfig {
    enum class Kind { Uniform, Explicit };
    Kind kind = Kind::Uniform;
    std::vector<double> probs;
};

struct CoverInstanceConfig {
    enum class Kind { Euclidean, Linear };
    Kind kind = Kind::Euclidean;
    double box_lo = 0.0;    // Euclidean
    double box_hi = 1.0;
    double angle_lo = 0.0;  // Linear, radians
    double angle_hi = 1.5;
};

// One experiment: mechanism, environment, agent, trial count, seed.
struct ExperimentConfig {
    std::string mechanism = "belief";  // mpl-seq | mpl-bin | cover | belief | naive
    std::size_t n = 3;
    double eps = 0.05;
    double delta = 0.1;
    double tau = 0.01;
    double nu = 0.1;
    std::size_t rounds = 0;        // 0 = use the budget rule
    double budget_constant = 4.0;
    std::size_t grid_intervals = 20;  // MPL discretization
    LotteryConfig lottery;
    ScheduleConfig schedule;
    GroundTruthConfig ground_truth;
    CoverInstanceConfig cover;
    AgentConfig agent;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string label;
    std::string out_dir;  // empty = env var or current directory

    void validate() const;  // throws ConfigError with a field diagnostic
};

// Parse from JSON text. Unknown fields are rejected with their path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical serialization: sorted keys, stable float formatting. Feeding
// the output back through parse_config reproduces the same canonical text.
std::string serialize_config(const ExperimentConfig& config);

// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash(const ExperimentConfig& config);

// Default output directory: ELICIT_OUT_DIR if set, else ".".
std::string default_out_dir();

}  // namespace elicit::harness
