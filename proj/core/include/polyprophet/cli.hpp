#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace polyprophet::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;  // verify only
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::string out_path;  // base path: writes <out>.json and appends <out>.csv
  std::optional<uint64_t> seed;
  std::optional<int64_t> trials;
  std::optional<int> budget;  // verify fuzz budget
  int jobs = 0;               // 0 = one worker per hardware thread
};

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_mechanism(const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace polyprophet::cli
