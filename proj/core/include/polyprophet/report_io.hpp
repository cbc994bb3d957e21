#pragma once

#include <string>

#include "polyprophet/harness.hpp"
#include "polyprophet/mechanism.hpp"

namespace polyprophet {

// JSON report documents. `generated_at` is the only volatile field; strip it
// before comparing replays.
std::string experiment_report_json(const ExperimentConfig& config,
                                   const ExperimentReport& report);
std::string mechanism_report_json(const ExperimentConfig& config,
                                  const MechanismReport& report);
std::string property_report_json(const ExperimentConfig& config,
                                 const PropertyReport& report);
std::string strip_volatile_fields(const std::string& report_json);

// Flat CSV, one row per run. First line is a version comment, second the
// header; rows use CRLF line endings. Mechanism columns are empty for plain
// experiment rows.
inline constexpr const char* kCsvVersionComment = "# polyprophet-csv v1";
inline constexpr const char* kCsvHeader =
    "config_hash,mode,trials,seed,mean_alg,mean_opt,ratio,ci_lo,ci_hi,welfare,revenue,benchmark";

std::string experiment_csv_row(const ExperimentConfig& config,
                               const ExperimentReport& report);
std::string mechanism_csv_row(const ExperimentConfig& config,
                              const MechanismReport& report);

// Appends a row, creating the file with the version comment + header first.
void append_csv(const std::string& path, const std::string& row);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace polyprophet
