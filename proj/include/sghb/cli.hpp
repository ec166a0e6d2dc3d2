#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sghb/index_sets.hpp"
#include "sghb/solver.hpp"

namespace sghb::cli {

enum class Family { full, sparse, energy, file, gap };
enum class MethodChoice { dense, lanczos, automatic };
enum class Format { csv, json };

struct ExperimentConfig {
  std::string command;
  Family family = Family::sparse;
  int d = 2;
  int k_first = 1;
  int k_last = 1;
  Rational a{0};
  std::string file;
  std::optional<MultiIndex> beta;  ///< anisotropic full grid / eval target
  std::vector<std::int64_t> offsets;
  std::vector<double> x;
  MethodChoice method = MethodChoice::automatic;
  double tol = 1e-8;
  std::uint64_t seed = 42;
  int threads = 1;
  std::size_t dense_cap = 4000;
  std::string out;
  Format format = Format::csv;
  ModelRhs rhs = ModelRhs::constant_one;
  std::string export_matrix;
  bool scan_all = false;
};

Family parse_family(const std::string& text);
MethodChoice parse_method(const std::string& text);
Format parse_format(const std::string& text);
/// "N" or "A..B" with 1 <= A <= B.
std::pair<int, int> parse_k_range(const std::string& text);
/// Comma-separated integers, e.g. "3,1".
std::vector<std::int64_t> parse_int_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// Throws ConfigError if the configuration is inconsistent.
void validate(const ExperimentConfig& cfg);

/// Index set of the configured family at level k. Diagnostics (e.g. a
/// closed non-monotone file) go to `err`.
MonotoneIndexSet build_index_set(const ExperimentConfig& cfg, int k, std::ostream& err);

/// rho exponent: (d-1)/d sparse, d-1 full, (d-1)(1-a)/(d-a) energy.
double asymptotic_rate(const ExperimentConfig& cfg);

/// Full command line entry point. Returns the process exit code: 0 ok,
/// 2 configuration error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sghb::cli
