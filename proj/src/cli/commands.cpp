#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sghb/cli.hpp"
#include "sghb/errors.hpp"
#include "sghb/extremal.hpp"
#include "sghb/kernels.hpp"
#include "sghb/spectral.hpp"
#include "sghb/transform.hpp"

namespace sghb::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt(const BigInt& v) { return v.str(); }

ordered_json big(const BigInt& v) {
  if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return v.convert_to<std::uint64_t>();
  return v.str();
}

ordered_json levels_json(const MultiIndex& beta) { return beta.levels(); }

std::string_view family_name(Family f) {
  switch (f) {
    case Family::full: return "full";
    case Family::sparse: return "sparse";
    case Family::energy: return "energy";
    case Family::file: return "file";
    case Family::gap: return "gap";
  }
  return "";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << quote(cells[i]);
    }
    out_ << "\r\n";
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  std::ostream& out_;
};

ordered_json header(const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = cfg.command;
  j["family"] = family_name(cfg.family);
  j["d"] = cfg.d;
  if (cfg.family == Family::energy) j["a"] = to_string(cfg.a);
  if (cfg.beta) j["beta"] = levels_json(*cfg.beta);
  return j;
}

// Levels to run: the configured range, or a single pass for fixed sets.
std::vector<int> levels(const ExperimentConfig& cfg) {
  if (cfg.family == Family::file || cfg.beta) return {0};
  std::vector<int> ks;
  for (int k = cfg.k_first; k <= cfg.k_last; ++k) ks.push_back(k);
  return ks;
}

SpectralReport spectrum(const GalerkinSystem& sys, const ExperimentConfig& cfg) {
  SpectralOptions opts;
  opts.dense_cap = cfg.dense_cap;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  switch (cfg.method) {
    case MethodChoice::dense: return dense_extremal_eigs(sys, cfg.dense_cap);
    case MethodChoice::lanczos: return lanczos_extremal_eigs(sys, opts);
    case MethodChoice::automatic: break;
  }
  return extremal_eigs(sys, opts);
}

struct Experiment {
  int k = 0;
  MonotoneIndexSet set;
  GalerkinSystem system;
};

Experiment setup(const ExperimentConfig& cfg, int k, std::ostream& err) {
  Experiment e;
  e.set = build_index_set(cfg, k, err);
  e.k = k == 0 ? e.set.max_level() : k;
  e.system = assemble_system(make_space(e.set));
  return e;
}

void export_matrix(const ExperimentConfig& cfg, const Experiment& e, bool many) {
  if (cfg.export_matrix.empty()) return;
  const std::string path = many ? cfg.export_matrix + ".k" + std::to_string(e.k) : cfg.export_matrix;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write matrix file '" + path + "'");
  write_coordinate(e.system.stiffness, f);
}

void cmd_condition(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto ks = levels(cfg);
  CsvWriter csv(out);
  ordered_json doc = header(cfg);
  doc["rows"] = ordered_json::array();
  if (cfg.format == Format::csv) {
    csv.row({"k", "dim", "lambda_min", "lambda_max", "kappa", "n_lambda", "n_tilde", "n_tilde_prime", "ratio_lower",
             "ratio_upper"});
  }
  for (int k : ks) {
    const auto e = setup(cfg, k, err);
    export_matrix(cfg, e, ks.size() > 1);
    const auto rep = spectrum(e.system, cfg);
    const auto bq = bounds_quantities(e.set);
    const auto sw = sandwich_check(bq, rep);
    if (cfg.format == Format::csv) {
      csv.row({std::to_string(e.k), std::to_string(e.system.dim()), fmt(rep.lambda_min), fmt(rep.lambda_max),
               fmt(rep.kappa), fmt(bq.n_lambda), fmt(bq.n_tilde), fmt(bq.n_tilde_prime), fmt(sw.ratio_lower),
               fmt(sw.ratio_upper)});
      continue;
    }
    ordered_json r;
    r["k"] = e.k;
    r["dim"] = e.system.dim();
    r["lambda_min"] = rep.lambda_min;
    r["lambda_max"] = rep.lambda_max;
    r["kappa"] = rep.kappa;
    r["n_lambda"] = big(bq.n_lambda);
    r["n_tilde"] = big(bq.n_tilde);
    r["n_tilde_prime"] = big(bq.n_tilde_prime);
    r["ratio_lower"] = sw.ratio_lower;
    r["ratio_upper"] = sw.ratio_upper;
    r["method"] = to_string(rep.method);
    r["iterations"] = rep.iterations;
    r["residual_tol"] = rep.residual_tol;
    r["seed"] = rep.seed;
    doc["rows"].push_back(std::move(r));
  }
  if (cfg.format == Format::json) out << doc.dump(2) << '\n';
}

void cmd_asymptotics(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const double rate = asymptotic_rate(cfg);
  struct Row {
    int k;
    std::size_t dim;
    SpectralReport rep;
    double rho;
  };
  std::vector<Row> rows;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k : levels(cfg)) {
    const auto e = setup(cfg, k, err);
    const auto rep = spectrum(e.system, cfg);
    const double rho = rep.kappa / (std::pow(static_cast<double>(k), cfg.d - 1) * std::exp2(k * rate));
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
    rows.push_back({k, e.system.dim(), rep, rho});
  }
  const double spread = hi / lo;
  if (cfg.format == Format::csv) {
    CsvWriter csv(out);
    csv.row({"k", "dim", "lambda_min", "lambda_max", "kappa", "rate", "rho"});
    for (const auto& r : rows) {
      csv.row({std::to_string(r.k), std::to_string(r.dim), fmt(r.rep.lambda_min), fmt(r.rep.lambda_max),
               fmt(r.rep.kappa), fmt(rate), fmt(r.rho)});
    }
    err << "rho max/min = " << fmt(spread) << '\n';
    return;
  }
  ordered_json doc = header(cfg);
  doc["rate"] = rate;
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"k", r.k},
                           {"dim", r.dim},
                           {"lambda_min", r.rep.lambda_min},
                           {"lambda_max", r.rep.lambda_max},
                           {"kappa", r.rep.kappa},
                           {"rho", r.rho},
                           {"method", to_string(r.rep.method)}});
  }
  doc["rho_min"] = lo;
  doc["rho_max"] = hi;
  doc["rho_max_over_min"] = spread;
  out << doc.dump(2) << '\n';
}

ordered_json bounds_json(const BoundsReport& b, std::size_t size) {
  ordered_json j;
  j["size"] = size;
  j["k_lambda"] = b.k_lambda;
  j["n_lambda"] = big(b.n_lambda);
  j["n_tilde"] = big(b.n_tilde);
  j["n_tilde_prime"] = big(b.n_tilde_prime);
  ordered_json maximal = ordered_json::object();
  for (const auto& [k, set] : b.maximal_sets) {
    ordered_json list = ordered_json::array();
    for (const auto& beta : set) list.push_back(levels_json(beta));
    maximal[std::to_string(k)] = std::move(list);
  }
  j["maximal_sets"] = std::move(maximal);
  return j;
}

void cmd_bounds(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  CsvWriter csv(out);
  ordered_json doc = header(cfg);
  doc["rows"] = ordered_json::array();
  if (cfg.format == Format::csv) {
    csv.row({"k", "size", "n_lambda", "n_tilde", "n_tilde_prime", "literal_n_lambda", "literal_n_tilde",
             "literal_n_tilde_prime"});
  }
  for (int k : levels(cfg)) {
    std::optional<GapExample> gap;
    MonotoneIndexSet set;
    if (cfg.family == Family::gap) {
      gap = gap_example(k, cfg.d);
      set = gap->closure;
    } else {
      set = build_index_set(cfg, k, err);
    }
    const int kk = k == 0 ? set.max_level() : k;
    const auto b = bounds_quantities(set);
    if (cfg.format == Format::csv) {
      std::vector<std::string> cells{std::to_string(kk), std::to_string(set.size()), fmt(b.n_lambda),
                                     fmt(b.n_tilde), fmt(b.n_tilde_prime)};
      if (gap) {
        cells.push_back(fmt(gap->literal_bounds.n_lambda));
        cells.push_back(fmt(gap->literal_bounds.n_tilde));
        cells.push_back(fmt(gap->literal_bounds.n_tilde_prime));
      } else {
        cells.insert(cells.end(), {"", "", ""});
      }
      csv.row(cells);
      continue;
    }
    ordered_json r{{"k", kk}};
    r.update(bounds_json(b, set.size()));
    if (gap) {
      r["literal"] = bounds_json(gap->literal_bounds, gap->literal.size());
      ordered_json lit = ordered_json::array();
      for (const auto& beta : gap->literal) lit.push_back(levels_json(beta));
      r["literal"]["members"] = std::move(lit);
    }
    doc["rows"].push_back(std::move(r));
  }
  if (cfg.format == Format::json) out << doc.dump(2) << '\n';
}

ordered_json witness_json(const WitnessReport& w) {
  return {{"kind", to_string(w.kind)},          {"hb_sq", w.hb_sq},       {"h1_sq", w.h1_sq},
          {"l2_sq", w.l2_sq},                   {"rayleigh", w.rayleigh},
          {"bound_direction", to_string(w.bound_direction)}};
}

void cmd_witness(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  CsvWriter csv(out);
  ordered_json doc = header(cfg);
  doc["rows"] = ordered_json::array();
  if (cfg.format == Format::csv) {
    csv.row({"k", "dim", "lambda_min", "lambda_max", "upper_rayleigh", "lower_rayleigh", "upper_contained",
             "lower_contained", "explicit_bound", "explicit_bound_holds", "lower_beta", "measured_constant"});
  }
  for (int k : levels(cfg)) {
    const auto e = setup(cfg, k, err);
    const auto rep = spectrum(e.system, cfg);
    const auto up = witness_upper(e.set);
    const auto low = witness_lower(e.set, cfg.scan_all);
    const double tol = 1e-8;
    const bool up_ok = up.witness.rayleigh <= rep.lambda_max * (1 + tol) &&
                       up.witness.rayleigh >= rep.lambda_min * (1 - tol);
    const bool low_ok = low.witness.rayleigh >= rep.lambda_min * (1 - tol) &&
                        low.witness.rayleigh <= rep.lambda_max * (1 + tol);
    if (cfg.format == Format::csv) {
      csv.row({std::to_string(e.k), std::to_string(e.system.dim()), fmt(rep.lambda_min), fmt(rep.lambda_max),
               fmt(up.witness.rayleigh), fmt(low.witness.rayleigh), up_ok ? "true" : "false",
               low_ok ? "true" : "false", fmt(up.explicit_bound), up.explicit_bound_holds ? "true" : "false",
               to_string(low.beta), fmt(low.measured_constant)});
      continue;
    }
    ordered_json u = witness_json(up.witness);
    u["level"] = up.level;
    u["direction"] = up.direction + 1;
    u["slice_size"] = up.slice.size();
    u["n_lambda"] = big(up.n_lambda);
    u["explicit_bound"] = up.explicit_bound;
    u["explicit_bound_holds"] = up.explicit_bound_holds;
    u["contained"] = up_ok;
    ordered_json l = witness_json(low.witness);
    l["beta"] = levels_json(low.beta);
    l["candidates"] = low.candidates;
    l["hb_over_h1"] = low.hb_over_h1;
    l["n_tilde_prime"] = big(low.n_tilde_prime);
    l["measured_constant"] = low.measured_constant;
    l["contained"] = low_ok;
    doc["rows"].push_back({{"k", e.k},
                           {"dim", e.system.dim()},
                           {"lambda_min", rep.lambda_min},
                           {"lambda_max", rep.lambda_max},
                           {"upper", std::move(u)},
                           {"lower", std::move(l)}});
  }
  if (cfg.format == Format::json) out << doc.dump(2) << '\n';
}

void cmd_solve(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  CsvWriter csv(out);
  ordered_json doc = header(cfg);
  doc["rhs"] = to_string(cfg.rhs);
  doc["tol"] = cfg.tol;
  doc["rows"] = ordered_json::array();
  if (cfg.format == Format::csv) {
    csv.row({"k", "dim", "iterations", "final_relative_residual", "center_value"});
  }
  for (int k : levels(cfg)) {
    const auto e = setup(cfg, k, err);
    const auto b = model_rhs(*e.system.space, cfg.rhs);
    auto res = pcg(e.system, b, cfg.tol);
    res.stats.seed = cfg.seed;
    const std::vector<double> center(static_cast<std::size_t>(cfg.d), 0.5);
    const double uc = evaluate_function(HBVector(e.system.space, res.x), center);
    if (cfg.format == Format::csv) {
      csv.row({std::to_string(e.k), std::to_string(e.system.dim()), std::to_string(res.stats.iterations),
               fmt(res.stats.final_relative_residual), fmt(uc)});
      continue;
    }
    doc["rows"].push_back({{"k", e.k},
                           {"dim", e.system.dim()},
                           {"iterations", res.stats.iterations},
                           {"final_relative_residual", res.stats.final_relative_residual},
                           {"residual_history", res.stats.residual_history},
                           {"seed", res.stats.seed},
                           {"converged", res.stats.converged},
                           {"center_value", uc}});
  }
  if (cfg.format == Format::json) out << doc.dump(2) << '\n';
}

// One basis function (with --offset) or the tensor hat psi_beta.
void cmd_eval(const ExperimentConfig& cfg, std::ostream& out) {
  double value = 0.0;
  std::string what;
  if (!cfg.offsets.empty()) {
    value = evaluate(BasisFunction{*cfg.beta, cfg.offsets}, cfg.x);
    what = "basis_function";
  } else {
    value = evaluate_function(psi_hb_coeffs(*cfg.beta), cfg.x);
    what = "psi_beta";
  }
  if (cfg.format == Format::csv) {
    CsvWriter csv(out);
    csv.row({"function", "value"});
    csv.row({what, fmt(value)});
    return;
  }
  ordered_json doc = header(cfg);
  doc["function"] = what;
  if (!cfg.offsets.empty()) doc["offset"] = cfg.offsets;
  doc["x"] = cfg.x;
  doc["value"] = value;
  out << doc.dump(2) << '\n';
}

void run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "condition") return cmd_condition(cfg, out, err);
  if (cfg.command == "asymptotics") return cmd_asymptotics(cfg, out, err);
  if (cfg.command == "bounds") return cmd_bounds(cfg, out, err);
  if (cfg.command == "witness") return cmd_witness(cfg, out, err);
  if (cfg.command == "solve") return cmd_solve(cfg, out, err);
  if (cfg.command == "eval") return cmd_eval(cfg, out);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Condition numbers of hierarchical-basis preconditioned sparse-grid Laplacians"};
  app.require_subcommand(1);

  struct Raw {
    std::string family = "sparse", k = "1", a = "0", method = "auto", format = "csv", rhs = "constant_one";
    std::string beta, offset, x;
  } raw;
  ExperimentConfig cfg;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"condition", "extreme eigenvalues, condition number and bound ratios per level"},
      {"asymptotics", "condition numbers normalised by the predicted growth law"},
      {"bounds", "combinatorial bound quantities of the index set"},
      {"witness", "Rayleigh-quotient witnesses for both extreme eigenvalues"},
      {"solve", "preconditioned CG on a model problem"},
      {"eval", "evaluate a basis function or tensor hat at a point"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--family", raw.family, "full | sparse | energy | file | gap");
    sub->add_option("--d", cfg.d, "dimension");
    sub->add_option("--k", raw.k, "level N or range A..B");
    sub->add_option("--a", raw.a, "energy parameter a < 1 (p/q or decimal)");
    sub->add_option("--file", cfg.file, "index file, one multi-index per line");
    sub->add_option("--beta", raw.beta, "multi-index, e.g. 3,1");
    sub->add_option("--method", raw.method, "dense | lanczos | auto");
    sub->add_option("--tol", cfg.tol, "Lanczos / PCG tolerance");
    sub->add_option("--seed", cfg.seed, "start-vector seed");
    sub->add_option("--threads", cfg.threads, "worker threads for matrix-vector products");
    sub->add_option("--dense-cap", cfg.dense_cap, "largest dimension for the dense eigensolver");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", raw.format, "csv | json");
    if (name == "solve") sub->add_option("--rhs", raw.rhs, "constant_one | product_sine");
    if (name == "condition") sub->add_option("--export-matrix", cfg.export_matrix, "write G in coordinate format");
    if (name == "witness") sub->add_flag("--scan-all", cfg.scan_all, "scan all of Lambda for the psi witness");
    if (name == "eval") {
      sub->add_option("--offset", raw.offset, "offsets of a basis function in block beta");
      sub->add_option("--x", raw.x, "evaluation point, comma separated");
    }
  }

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.family = parse_family(raw.family);
    std::tie(cfg.k_first, cfg.k_last) = parse_k_range(raw.k);
    cfg.a = parse_rational(raw.a);
    cfg.method = parse_method(raw.method);
    cfg.format = parse_format(raw.format);
    cfg.rhs = parse_model_rhs(raw.rhs);
    if (!raw.beta.empty()) {
      std::vector<int> levels;
      for (auto v : parse_int_list(raw.beta)) {
        if (v < 1 || v > 60) throw ConfigError("--beta levels must lie in 1..60");
        levels.push_back(static_cast<int>(v));
      }
      cfg.beta = MultiIndex(levels);
    }
    if (!raw.offset.empty()) cfg.offsets = parse_int_list(raw.offset);
    if (!raw.x.empty()) cfg.x = parse_real_list(raw.x);
    validate(cfg);
    kernels::set_num_threads(cfg.threads);

    if (cfg.out.empty()) {
      run(cfg, out, err);
    } else {
      std::ostringstream buf;
      run(cfg, buf, err);
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + cfg.out + "'");
      f << buf.str();
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace sghb::cli
