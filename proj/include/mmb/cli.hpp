#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mmb::cli {

enum class Command { Bound, Optimize, Crossover, Simulate, Exact, Compare, Verify };

/// Fully resolved settings of one run. Together with the program version it
/// determines the output byte for byte.
struct RunConfig {
  Command command{Command::Bound};
  long long n{0};
  std::vector<double> epsilons;
  /// "std[:k]", "geom:lo:hi:k", "lin:lo:hi:k" or "interior:lo:hi:k"; used when
  /// no explicit epsilons are given.
  std::string grid;
  std::string directions{"both"};
  std::string family;
  std::string dist_file;
  bool renormalize{false};
  std::string methods{"all"};
  std::vector<double> targets;
  std::string oracle{"mc"};
  long long trials{100000};
  std::uint64_t seed{1};
  unsigned threads{0};
  std::string format{"csv"};
  std::string output;
};

std::string_view to_string(Command c);

/// Canonical one-line rendering of the config used in output headers.
std::string describe(const RunConfig& config);

/// Executes one run. Exit status: 0 success, 1 usage or domain error,
/// 2 when a bound or lemma violation was detected.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including an optional --config key=value file) and runs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmb::cli
