#include "elicit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "elicit/errors.hpp"

namespace elicit::harness {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace

ReportSummary summarize(const std::vector<ReportRow>& rows, const std::string& config_hash,
                        std::uint64_t seed, const std::string& mechanism, double eps) {
    if (rows.empty()) throw std::invalid_argument("summarize: no rows");
    ReportSummary s;
    s.config_hash = config_hash;
    s.seed = seed;
    s.mechanism = mechanism;
    s.trials = rows.size();
    s.n = rows.front().n;
    s.eps = eps;
    std::vector<double> errors;
    errors.reserve(rows.size());
    double error_sum = 0.0;
    double query_sum = 0.0;
    double payment_sum = 0.0;
    double max_gain = -1e300;
    std::size_t successes = 0;
    for (const ReportRow& r : rows) {
        errors.push_back(r.error_tv);
        error_sum += r.error_tv;
        query_sum += static_cast<double>(r.queries);
        payment_sum += r.payment;
        max_gain = std::max(max_gain, r.gain);
        if (r.error_tv <= eps) ++successes;
    }
    std::sort(errors.begin(), errors.end());
    s.success_rate = static_cast<double>(successes) / static_cast<double>(rows.size());
    s.error_mean = error_sum / static_cast<double>(rows.size());
    s.error_p50 = quantile(errors, 0.5);
    s.error_p90 = quantile(errors, 0.9);
    s.error_max = errors.back();
    s.mean_queries = query_sum / static_cast<double>(rows.size());
    s.max_gain = max_gain;
    s.mean_payment = payment_sum / static_cast<double>(rows.size());
    return s;
}

std::string csv_header() {
    return "run_id,seed,mechanism,n,eps,queries,error_tv,payment,gain,ms";
}

std::string to_csv(const std::vector<ReportRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("to_csv: no rows");
    std::string out = csv_header();
    out.push_back('\n');
    for (const ReportRow& r : rows) {
        out += r.run_id;
        out.push_back(',');
        out += std::to_string(r.seed);
        out.push_back(',');
        out += r.mechanism;
        out.push_back(',');
        out += std::to_string(r.n);
        out.push_back(',');
        out += format_double(r.eps);
        out.push_back(',');
        out += std::to_string(r.queries);
        out.push_back(',');
        out += format_double(r.error_tv);
        out.push_back(',');
        out += format_double(r.payment);
        out.push_back(',');
        out += format_double(r.gain);
        out.push_back(',');
        out += format_double(r.ms);
        out.push_back('\n');
    }
    return out;
}

std::string to_json_summary(const ReportSummary& s) {
    json j;
    j["schema_version"] = 1;
    j["config_hash"] = s.config_hash;
    j["seed"] = s.seed;
    j["mechanism"] = s.mechanism;
    j["trials"] = s.trials;
    j["n"] = s.n;
    j["eps"] = s.eps;
    j["success_rate"] = s.success_rate;
    j["error_mean"] = s.error_mean;
    j["error_p50"] = s.error_p50;
    j["error_p90"] = s.error_p90;
    j["error_max"] = s.error_max;
    j["mean_queries"] = s.mean_queries;
    j["max_gain"] = s.max_gain;
    j["mean_payment"] = s.mean_payment;
    return j.dump(2);
}

std::pair<std::string, std::string> emit_report(const std::vector<ReportRow>& rows,
                                                const ReportSummary& summary,
                                                const std::string& dir,
                                                const std::string& stem) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    const std::string csv_path = (fs::path(dir) / (stem + ".csv")).string();
    const std::string json_path = (fs::path(dir) / (stem + ".json")).string();
    {
        std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("emit_report: cannot write " + csv_path);
        out << to_csv(rows);
    }
    {
        std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("emit_report: cannot write " + json_path);
        out << to_json_summary(summary) << "\n";
    }
    return {csv_path, json_path};
}

std::string transcript_to_json(const Transcript& t) {
    json j;
    json queries = json::array();
    for (std::size_t i = 0; i < t.queries.size(); ++i) {
        queries.push_back({{"left", t.queries[i].left},
                           {"right", t.queries[i].right},
                           {"answer", t.answers[i]}});
    }
    j["queries"] = queries;
    j["final_choice"] = t.final_choice;
    j["hypothesis"] = t.hypothesis;
    return j.dump(2);
}

}  // namespace elicit::harness
