#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qikdv/config.hpp"

namespace qikdv::cli {

struct Invocation {
  std::string command;
  std::string config_path;  // empty: all defaults
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> orders;
};

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 2;
inline constexpr int kNumerical = 3;
inline constexpr int kIo = 4;

/// Runs one subcommand, writing artifacts under inv.out_dir. Errors are reported as a JSON
/// object on stderr (and in the manifest when the output directory is usable).
int run(const Invocation& inv);

/// Config after applying --seed/--orders; exposed for tests.
Config effective_config(const Invocation& inv);

}  // namespace qikdv::cli
