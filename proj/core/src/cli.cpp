#include "polyprophet/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "polyprophet/config.hpp"
#include "polyprophet/errors.hpp"
#include "polyprophet/report_io.hpp"

namespace polyprophet::cli {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void apply_overrides(ExperimentConfig& config, const Options& opts) {
  if (opts.seed) config.seed = *opts.seed;
  if (opts.trials) {
    if (*opts.trials < 1) throw ValidationError("--trials must be >= 1");
    config.trials = *opts.trials;
  }
  validate_config(config);
}

// Runs one experiment/mechanism cell and emits its JSON + CSV row.
void emit_cell(const ExperimentConfig& config, const Options& opts, std::ostream& out,
               bool write_json) {
  std::string report_json;
  std::string csv_row;
  if (config.mode == RunMode::kMechanism) {
    const MechanismReport report = run_mechanism(config, opts.jobs);
    report_json = mechanism_report_json(config, report);
    csv_row = mechanism_csv_row(config, report);
  } else {
    const ExperimentReport report = run_experiment(config, opts.jobs);
    report_json = experiment_report_json(config, report);
    csv_row = experiment_csv_row(config, report);
  }
  if (opts.out_path.empty()) {
    out << report_json << "\n";
  } else {
    if (write_json) write_text_file(opts.out_path + ".json", report_json);
    append_csv(opts.out_path + ".csv", csv_row);
    out << csv_row << "\n";
  }
}

int guarded(std::ostream& err, int (*body)(const Options&, std::ostream&, std::ostream&),
            const Options& opts, std::ostream& out) {
  try {
    return body(opts, out, err);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run_body(const Options& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = parse_config_file(opts.config_path);
  if (config.mode == RunMode::kVerify) {
    throw ValidationError("config has mode verify; use the verify command");
  }
  apply_overrides(config, opts);
  emit_cell(config, opts, out, /*write_json=*/true);
  (void)err;
  return kExitOk;
}

int mechanism_body(const Options& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = parse_config_file(opts.config_path);
  if (config.mode != RunMode::kMechanism) {
    throw ValidationError("mechanism command needs a config with mode mechanism");
  }
  apply_overrides(config, opts);
  emit_cell(config, opts, out, /*write_json=*/true);
  (void)err;
  return kExitOk;
}

int sweep_body(const Options& opts, std::ostream& out, std::ostream& err) {
  const std::string text = slurp(opts.config_path);
  std::vector<ExperimentConfig> cells = expand_sweep(text);
  int index = 0;
  for (ExperimentConfig& cell : cells) {
    if (cell.mode == RunMode::kVerify) {
      throw ValidationError("sweep cells must be experiment or mechanism mode");
    }
    apply_overrides(cell, opts);
    // one JSON per cell, all rows appended to the same CSV
    std::string report_json;
    std::string csv_row;
    if (cell.mode == RunMode::kMechanism) {
      const MechanismReport report = run_mechanism(cell, opts.jobs);
      report_json = mechanism_report_json(cell, report);
      csv_row = mechanism_csv_row(cell, report);
    } else {
      const ExperimentReport report = run_experiment(cell, opts.jobs);
      report_json = experiment_report_json(cell, report);
      csv_row = experiment_csv_row(cell, report);
    }
    if (opts.out_path.empty()) {
      out << report_json << "\n";
    } else {
      write_text_file(opts.out_path + ".cell" + std::to_string(index) + ".json",
                      report_json);
      append_csv(opts.out_path + ".csv", csv_row);
      out << csv_row << "\n";
    }
    ++index;
  }
  (void)err;
  return kExitOk;
}

int verify_body(const Options& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = parse_config_file(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  validate_config(config);
  const int budget = opts.budget.value_or(config.fuzz_budget);
  if (budget < 0) throw ValidationError("--budget must be >= 0");
  if (budget == 0) {
    err << "warning: 0 instances checked (budget is 0)\n";
    out << "verify: 0 instances checked\n";
    return kExitOk;
  }

  const PropertyReport report = verify_properties(config, budget, opts.jobs);
  for (const auto& p : report.properties) {
    out << (p.pass() ? "[PASS] " : "[FAIL] ") << p.name << ": " << p.checks
        << " checks, " << p.failures << " failures";
    if (!p.pass()) out << " (first: " << p.counterexample << ")";
    out << "\n";
  }
  out << "verify: " << report.instances << " instances checked, "
      << (report.all_pass ? "all properties hold" : "property failures found") << "\n";
  if (!opts.out_path.empty()) {
    write_text_file(opts.out_path + ".json", property_report_json(config, report));
  }
  return report.all_pass ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, run_body, opts, out);
}

int cmd_verify(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, verify_body, opts, out);
}

int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, sweep_body, opts, out);
}

int cmd_mechanism(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, mechanism_body, opts, out);
}

}  // namespace polyprophet::cli
