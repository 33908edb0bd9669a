#include "elicit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "elicit/errors.hpp"

namespace elicit::harness {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key))
            throw ConfigError(where + ": unknown field '" + key + "'");
    }
}

double get_number(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return j[key].get<double>();
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback,
                      const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_unsigned())
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    return j[key].get<std::size_t>();
}

std::vector<double> get_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

AgentConfig parse_agent(const json& j) {
    AgentConfig agent;
    reject_unknown(j, {"kind", "type", "report", "bits"}, "agent");
    const std::string kind = j.value("kind", std::string("truthful"));
    if (kind == "truthful") {
        agent.kind = AgentConfig::Kind::Truthful;
    } else if (kind == "misreport") {
        agent.kind = AgentConfig::Kind::Misreport;
    } else if (kind == "sequences") {
        agent.kind = AgentConfig::Kind::Sequences;
    } else {
        throw ConfigError("agent.kind: expected truthful | misreport | sequences");
    }
    if (j.contains("type")) {
        if (j["type"].is_string()) {
            if (j["type"].get<std::string>() != "random")
                throw ConfigError("agent.type: expected an array or \"random\"");
        } else {
            agent.type = get_vector(j["type"], "agent.type");
        }
    }
    if (j.contains("report")) agent.report = get_vector(j["report"], "agent.report");
    if (j.contains("bits")) {
        if (!j["bits"].is_string()) throw ConfigError("agent.bits: expected a bit string");
        agent.bits = j["bits"].get<std::string>();
        for (char c : agent.bits) {
            if (c != '0' && c != '1') throw ConfigError("agent.bits: characters must be 0/1");
        }
    }
    return agent;
}

}  // namespace

void ExperimentConfig::validate() const {
    static const std::set<std::string> mechanisms = {"mpl-seq", "mpl-bin", "cover", "belief",
                                                     "naive"};
    if (!mechanisms.contains(mechanism))
        throw ConfigError("mechanism: expected mpl-seq | mpl-bin | cover | belief | naive");
    if (n < 2) throw ConfigError("n: must be >= 2");
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps: must lie in (0, 1)");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau: must lie in (0, 1)");
    if (trials == 0) throw ConfigError("trials: must be >= 1");
    if (grid_intervals < 1) throw ConfigError("grid_intervals: must be >= 1");
    if (!(lottery.low < lottery.high)) throw ConfigError("lottery: low < high required");
    if (!(lottery.p_high > 0.0 && lottery.p_high < 1.0))
        throw ConfigError("lottery.p_high: must lie in (0, 1)");
    if (!(budget_constant > 0.0)) throw ConfigError("budget_constant: must be > 0");
    if (ground_truth.kind == GroundTruthConfig::Kind::Explicit &&
        ground_truth.probs.size() != n)
        throw ConfigError("ground_truth.probs: length must equal n");
    if (cover.kind == CoverInstanceConfig::Kind::Euclidean && !(cover.box_lo < cover.box_hi))
        throw ConfigError("cover: box_lo < box_hi required");
    if (cover.kind == CoverInstanceConfig::Kind::Linear &&
        !(cover.angle_lo < cover.angle_hi && cover.angle_hi - cover.angle_lo < 3.141592653))
        throw ConfigError("cover: need angle_lo < angle_hi spanning less than pi");
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    reject_unknown(j,
                   {"mechanism", "n", "eps", "delta", "tau", "nu", "rounds", "budget_constant",
                    "grid_intervals", "lottery", "schedule", "ground_truth", "cover", "agent",
                    "trials", "seed", "label", "out_dir"},
                   "config");

    ExperimentConfig c;
    if (j.contains("mechanism")) {
        if (!j["mechanism"].is_string()) throw ConfigError("mechanism: expected a string");
        c.mechanism = j["mechanism"].get<std::string>();
    }
    c.n = get_count(j, "n", c.n, "config");
    c.eps = get_number(j, "eps", c.eps, "config");
    c.delta = get_number(j, "delta", c.delta, "config");
    c.tau = get_number(j, "tau", c.tau, "config");
    c.nu = get_number(j, "nu", c.nu, "config");
    c.rounds = get_count(j, "rounds", c.rounds, "config");
    c.budget_constant = get_number(j, "budget_constant", c.budget_constant, "config");
    c.grid_intervals = get_count(j, "grid_intervals", c.grid_intervals, "config");
    c.trials = get_count(j, "trials", c.trials, "config");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed: expected an integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw ConfigError("label: expected a string");
        c.label = j["label"].get<std::string>();
    }
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) throw ConfigError("out_dir: expected a string");
        c.out_dir = j["out_dir"].get<std::string>();
    }

    if (j.contains("lottery")) {
        const json& l = j["lottery"];
        reject_unknown(l, {"low", "high", "p_high"}, "lottery");
        c.lottery.low = get_number(l, "low", c.lottery.low, "lottery");
        c.lottery.high = get_number(l, "high", c.lottery.high, "lottery");
        c.lottery.p_high = get_number(l, "p_high", c.lottery.p_high, "lottery");
    }
    if (j.contains("schedule")) {
        const json& s = j["schedule"];
        reject_unknown(s, {"kind", "safety", "log_p"}, "schedule");
        const std::string kind = s.value("kind", std::string("geometric"));
        if (kind == "geometric") {
            c.schedule.kind = ScheduleConfig::Kind::Geometric;
        } else if (kind == "uniform") {
            c.schedule.kind = ScheduleConfig::Kind::Uniform;
        } else if (kind == "explicit") {
            c.schedule.kind = ScheduleConfig::Kind::Explicit;
        } else {
            throw ConfigError("schedule.kind: expected geometric | uniform | explicit");
        }
        c.schedule.safety = get_number(s, "safety", c.schedule.safety, "schedule");
        if (s.contains("log_p")) c.schedule.log_p = get_vector(s["log_p"], "schedule.log_p");
    }
    if (j.contains("ground_truth")) {
        const json& g = j["ground_truth"];
        reject_unknown(g, {"kind", "probs"}, "ground_truth");
        const std::string kind = g.value("kind", std::string("uniform"));
        if (kind == "uniform") {
            c.ground_truth.kind = GroundTruthConfig::Kind::Uniform;
        } else if (kind == "explicit") {
            c.ground_truth.kind = GroundTruthConfig::Kind::Explicit;
        } else {
            throw ConfigError("ground_truth.kind: expected uniform | explicit");
        }
        if (g.contains("probs")) c.ground_truth.probs = get_vector(g["probs"], "ground_truth.probs");
    }
    if (j.contains("cover")) {
        const json& v = j["cover"];
        reject_unknown(v, {"kind", "box_lo", "box_hi", "angle_lo", "angle_hi"}, "cover");
        const std::string kind = v.value("kind", std::string("euclidean"));
        if (kind == "euclidean") {
            c.cover.kind = CoverInstanceConfig::Kind::Euclidean;
        } else if (kind == "linear") {
            c.cover.kind = CoverInstanceConfig::Kind::Linear;
        } else {
            throw ConfigError("cover.kind: expected euclidean | linear");
        }
        c.cover.box_lo = get_number(v, "box_lo", c.cover.box_lo, "cover");
        c.cover.box_hi = get_number(v, "box_hi", c.cover.box_hi, "cover");
        c.cover.angle_lo = get_number(v, "angle_lo", c.cover.angle_lo, "cover");
        c.cover.angle_hi = get_number(v, "angle_hi", c.cover.angle_hi, "cover");
    }
    if (j.contains("agent")) c.agent = parse_agent(j["agent"]);

    c.validate();
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    json j;
    j["mechanism"] = c.mechanism;
    j["n"] = c.n;
    j["eps"] = c.eps;
    j["delta"] = c.delta;
    j["tau"] = c.tau;
    j["nu"] = c.nu;
    j["rounds"] = c.rounds;
    j["budget_constant"] = c.budget_constant;
    j["grid_intervals"] = c.grid_intervals;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["label"] = c.label;
    j["out_dir"] = c.out_dir;
    j["lottery"] = {{"low", c.lottery.low}, {"high", c.lottery.high}, {"p_high", c.lottery.p_high}};
    json sched;
    switch (c.schedule.kind) {
        case ScheduleConfig::Kind::Geometric: sched["kind"] = "geometric"; break;
        case ScheduleConfig::Kind::Uniform: sched["kind"] = "uniform"; break;
        case ScheduleConfig::Kind::Explicit: sched["kind"] = "explicit"; break;
    }
    sched["safety"] = c.schedule.safety;
    if (!c.schedule.log_p.empty()) sched["log_p"] = c.schedule.log_p;
    j["schedule"] = sched;
    json gt;
    gt["kind"] = c.ground_truth.kind == GroundTruthConfig::Kind::Uniform ? "uniform" : "explicit";
    if (!c.ground_truth.probs.empty()) gt["probs"] = c.ground_truth.probs;
    j["ground_truth"] = gt;
    json cov;
    cov["kind"] = c.cover.kind == CoverInstanceConfig::Kind::Euclidean ? "euclidean" : "linear";
    cov["box_lo"] = c.cover.box_lo;
    cov["box_hi"] = c.cover.box_hi;
    cov["angle_lo"] = c.cover.angle_lo;
    cov["angle_hi"] = c.cover.angle_hi;
    j["cover"] = cov;
    json agent;
    switch (c.agent.kind) {
        case AgentConfig::Kind::Truthful: agent["kind"] = "truthful"; break;
        case AgentConfig::Kind::Misreport: agent["kind"] = "misreport"; break;
        case AgentConfig::Kind::Sequences: agent["kind"] = "sequences"; break;
    }
    if (!c.agent.type.empty()) agent["type"] = c.agent.type;
    if (!c.agent.report.empty()) agent["report"] = c.agent.report;
    if (!c.agent.bits.empty()) agent["bits"] = c.agent.bits;
    j["agent"] = agent;
    return j.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = serialize_config(config);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string default_out_dir() {
    const char* env = std::getenv("ELICIT_OUT_DIR");
    if (env != nullptr && env[0] != '\0') return env;
    return ".";
}

}  // namespace elicit::harness
