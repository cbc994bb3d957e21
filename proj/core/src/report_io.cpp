#include "polyprophet/report_io.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "polyprophet/config.hpp"

namespace polyprophet {

namespace {

using nlohmann::json;

std::string now_utc_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json stats_to_json(const SummaryStats& s) {
  return json{{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev}, {"se", s.se}};
}

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::kExperiment:
      return "experiment";
    case RunMode::kVerify:
      return "verify";
    case RunMode::kMechanism:
      return "mechanism";
  }
  return "experiment";
}

json report_common(const ExperimentConfig& config) {
  json j;
  j["config_hash"] = config_hash_hex(config);
  j["mode"] = mode_name(config.mode);
  j["seed"] = config.seed;
  j["generated_at"] = now_utc_iso8601();
  return j;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string experiment_report_json(const ExperimentConfig& config,
                                   const ExperimentReport& report) {
  json j = report_common(config);
  j["trials"] = report.trials;
  j["alg"] = stats_to_json(report.alg);
  j["opt"] = stats_to_json(report.opt);
  j["margin"] = stats_to_json(report.margin);
  j["ratio"] = report.ratio;
  j["ratio_se"] = report.ratio_se;
  j["ci95"] = {report.ci_lo, report.ci_hi};
  j["guarantee_pass"] = report.guarantee_pass;
  j["reduction_objective_exact"] = report.reduction_objective_exact;
  j["reduction_opt_max_err"] = report.reduction_opt_max_err;
  j["reduction_opt_ok"] = report.reduction_opt_ok;
  return j.dump(2);
}

std::string mechanism_report_json(const ExperimentConfig& config,
                                  const MechanismReport& report) {
  json j = report_common(config);
  j["trials"] = report.trials;
  j["objective"] =
      report.objective == MechanismObjective::kWelfare ? "welfare" : "revenue";
  j["alg"] = stats_to_json(report.alg);
  j["benchmark"] = stats_to_json(report.benchmark);
  j["margin"] = stats_to_json(report.margin);
  j["revenue"] = stats_to_json(report.revenue);
  j["ratio"] = report.ratio;
  j["ratio_se"] = report.ratio_se;
  j["ci95"] = {report.ci_lo, report.ci_hi};
  j["guarantee_pass"] = report.guarantee_pass;
  j["best_response_checks"] = report.best_response_checks;
  j["best_response_failures"] = report.best_response_failures;
  j["ir_ok"] = report.ir_ok;
  return j.dump(2);
}

std::string property_report_json(const ExperimentConfig& config,
                                 const PropertyReport& report) {
  json j = report_common(config);
  j["instances"] = report.instances;
  j["all_pass"] = report.all_pass;
  json props = json::array();
  for (const auto& p : report.properties) {
    props.push_back({{"name", p.name},
                     {"checks", p.checks},
                     {"failures", p.failures},
                     {"pass", p.pass()},
                     {"counterexample", p.counterexample}});
  }
  j["properties"] = std::move(props);
  return j.dump(2);
}

std::string strip_volatile_fields(const std::string& report_json) {
  json j = json::parse(report_json);
  j.erase("generated_at");
  return j.dump(2);
}

std::string experiment_csv_row(const ExperimentConfig& config,
                               const ExperimentReport& report) {
  std::string row;
  row += config_hash_hex(config);
  row += "," + mode_name(config.mode);
  row += "," + std::to_string(report.trials);
  row += "," + std::to_string(report.seed);
  row += "," + fmt_double(report.alg.mean);
  row += "," + fmt_double(report.opt.mean);
  row += "," + fmt_double(report.ratio);
  row += "," + fmt_double(report.ci_lo);
  row += "," + fmt_double(report.ci_hi);
  row += ",,,";  // welfare, revenue, benchmark empty for experiment rows
  return row;
}

std::string mechanism_csv_row(const ExperimentConfig& config,
                              const MechanismReport& report) {
  const double welfare =
      report.objective == MechanismObjective::kWelfare ? report.alg.mean : 0.0;
  std::string row;
  row += config_hash_hex(config);
  row += "," + mode_name(config.mode);
  row += "," + std::to_string(report.trials);
  row += "," + std::to_string(report.seed);
  row += "," + fmt_double(report.alg.mean);
  row += "," + fmt_double(report.benchmark.mean);
  row += "," + fmt_double(report.ratio);
  row += "," + fmt_double(report.ci_lo);
  row += "," + fmt_double(report.ci_hi);
  row += "," + fmt_double(welfare);
  row += "," + fmt_double(report.revenue.mean);
  row += "," + fmt_double(report.benchmark.mean);
  return row;
}

void append_csv(const std::string& path, const std::string& row) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open CSV for writing: " + path);
  if (fresh) {
    out << kCsvVersionComment << "\r\n" << kCsvHeader << "\r\n";
  }
  out << row << "\r\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << text;
}

}  // namespace polyprophet
