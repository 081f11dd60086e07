#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace bbsvm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Settings shared by all subcommands after flag parsing.
struct Config {
  std::string command;
  std::string data_path;
  std::string train_path;
  std::string test_path;
  std::string model_path;
  std::string out_path;
  double epsilon = 0.001;
  double C = std::numeric_limits<double>::infinity();
  std::size_t lookahead = 10;
  std::optional<double> delta;
  std::size_t runs = 20;
  std::uint64_t seed = 0;
  std::string format = "libsvm";
};

/// Runs one command. `args` excludes the program name. Returns 0 on
/// success, 1 on a usage error, 2 on a data or model error; diagnostics go
/// to `err` as a single line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bbsvm::cli
