#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyprophet/harness.hpp"

namespace polyprophet {

// Experiment config file: a single JSON document per experiment. Unknown keys
// are rejected; see README for the schema. Throws ValidationError with a
// pointer to the offending field.
ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical serialization (sorted keys, no volatile fields).
// parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

// FNV-1a over the canonical serialization with the seed field removed; pairs
// with the seed column so a CSV row is replayable from (hash, seed).
uint64_t config_hash(const ExperimentConfig& config);
std::string config_hash_hex(const ExperimentConfig& config);

// Sweep support: the optional top-level "sweep" object maps JSON pointers to
// value lists; cells are the cross product applied to the base document.
bool has_sweep(const std::string& json_text);
// Throws ValidationError when the sweep section is missing or empty.
std::vector<ExperimentConfig> expand_sweep(const std::string& json_text);

}  // namespace polyprophet
