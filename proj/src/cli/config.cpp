#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sghb/cli.hpp"
#include "sghb/errors.hpp"

namespace sghb::cli {

Family parse_family(const std::string& text) {
  if (text == "full") return Family::full;
  if (text == "sparse") return Family::sparse;
  if (text == "energy") return Family::energy;
  if (text == "file") return Family::file;
  if (text == "gap") return Family::gap;
  throw ConfigError("unknown family '" + text + "' (expected full, sparse, energy, file or gap)");
}

MethodChoice parse_method(const std::string& text) {
  if (text == "dense") return MethodChoice::dense;
  if (text == "lanczos") return MethodChoice::lanczos;
  if (text == "auto") return MethodChoice::automatic;
  throw ConfigError("unknown method '" + text + "' (expected dense, lanczos or auto)");
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw ConfigError("unknown format '" + text + "' (expected csv or json)");
}

namespace {

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError(std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

}  // namespace

std::pair<int, int> parse_k_range(const std::string& text) {
  const auto dots = text.find("..");
  int lo = 0, hi = 0;
  if (dots == std::string::npos) {
    lo = hi = parse_int(text, "level");
  } else {
    lo = parse_int(std::string_view(text).substr(0, dots), "level");
    hi = parse_int(std::string_view(text).substr(dots + 2), "level");
  }
  if (lo < 1 || hi < lo) throw ConfigError("invalid level range '" + text + "'");
  return {lo, hi};
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> v;
  for (const auto& part : split(text, ',')) {
    std::int64_t x = 0;
    const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
    if (part.empty() || ec != std::errc{} || p != part.data() + part.size()) {
      throw ConfigError("invalid integer list '" + text + "'");
    }
    v.push_back(x);
  }
  if (v.empty()) throw ConfigError("empty integer list");
  return v;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> v;
  for (const auto& part : split(text, ',')) {
    double x = 0;
    const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
    if (part.empty() || ec != std::errc{} || p != part.data() + part.size() || !std::isfinite(x)) {
      throw ConfigError("invalid real list '" + text + "'");
    }
    v.push_back(x);
  }
  if (v.empty()) throw ConfigError("empty real list");
  return v;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("--d must be >= 1");
  if (cfg.family == Family::energy && cfg.a >= Rational(1)) throw ConfigError("--a must be < 1");
  if (cfg.family == Family::gap && cfg.d < 2) throw ConfigError("the gap family needs d >= 2");
  if (cfg.family == Family::file && cfg.file.empty()) throw ConfigError("--family file needs --file");
  if (cfg.beta && cfg.beta->dim() != cfg.d) throw ConfigError("--beta dimension differs from --d");
  if (!(cfg.tol > 0.0) || cfg.tol >= 1.0) throw ConfigError("--tol must lie in (0, 1)");
  if (cfg.threads < 1) throw ConfigError("--threads must be >= 1");
  if (cfg.dense_cap < 1) throw ConfigError("--dense-cap must be >= 1");
  if (cfg.command == "asymptotics") {
    if (cfg.family == Family::file || cfg.family == Family::gap) {
      throw ConfigError("asymptotics needs family full, sparse or energy");
    }
    if (cfg.beta) throw ConfigError("asymptotics does not accept --beta");
    if (cfg.k_last - cfg.k_first + 1 < 4) throw ConfigError("asymptotics needs at least 4 levels");
    if (cfg.d < 2) throw ConfigError("asymptotics needs d >= 2");
  }
  if (cfg.command == "eval") {
    if (!cfg.beta) throw ConfigError("eval needs --beta");
    if (cfg.x.size() != static_cast<std::size_t>(cfg.d)) throw ConfigError("eval needs --x with d coordinates");
    if (!cfg.offsets.empty() && cfg.offsets.size() != static_cast<std::size_t>(cfg.d)) {
      throw ConfigError("--offset needs d entries");
    }
    for (std::size_t j = 0; j < cfg.offsets.size(); ++j) {
      const auto level = (*cfg.beta)[static_cast<int>(j)];
      if (cfg.offsets[j] < 0 || cfg.offsets[j] >= (std::int64_t{1} << (level - 1))) {
        throw ConfigError("--offset entry out of range for its level");
      }
    }
  }
}

MonotoneIndexSet build_index_set(const ExperimentConfig& cfg, int k, std::ostream& err) {
  switch (cfg.family) {
    case Family::full:
      return cfg.beta ? make_full_grid(*cfg.beta) : make_isotropic_full_grid(k, cfg.d);
    case Family::sparse:
      return make_standard_sparse(k, cfg.d);
    case Family::energy:
      return make_energy_optimized(k, cfg.d, cfg.a);
    case Family::gap:
      return gap_example(k, cfg.d).closure;
    case Family::file: {
      std::ifstream in(cfg.file);
      if (!in) throw ConfigError("cannot open index file '" + cfg.file + "'");
      auto set = read_index_file(in, err);
      if (set.dim() != cfg.d) throw ConfigError("index file dimension differs from --d");
      return set;
    }
  }
  throw ConfigError("unknown family");
}

double asymptotic_rate(const ExperimentConfig& cfg) {
  const double d = cfg.d;
  switch (cfg.family) {
    case Family::sparse: return (d - 1.0) / d;
    case Family::full: return d - 1.0;
    case Family::energy: {
      const double a = boost::rational_cast<double>(cfg.a);
      return (d - 1.0) * (1.0 - a) / (d - a);
    }
    default: throw ConfigError("no asymptotic rate for this family");
  }
}

}  // namespace sghb::cli
