#include "sghb/index_sets.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "sghb/errors.hpp"

namespace sghb {

namespace {

void require_valid_levels(const std::vector<int>& levels) {
  if (levels.empty()) throw ConfigError("multi-index must have at least one component");
  for (int l : levels) {
    if (l < 1) throw ConfigError("multi-index levels must be >= 1, got " + std::to_string(l));
  }
}

void require_same_dim(std::span<const MultiIndex> indices) {
  if (indices.empty()) return;
  const int d = indices.front().dim();
  for (const auto& beta : indices) {
    if (beta.dim() != d) {
      throw ConfigError("dimension mismatch: " + to_string(beta) + " vs d=" + std::to_string(d));
    }
  }
}

// Calls fn on every multi-index in the box [1, upper_1] x ... x [1, upper_d].
void for_each_in_box(const std::vector<int>& upper, const std::function<void(const MultiIndex&)>& fn) {
  std::vector<int> cur(upper.size(), 1);
  while (true) {
    fn(MultiIndex(cur));
    std::size_t i = cur.size();
    while (i > 0) {
      --i;
      if (cur[i] < upper[i]) {
        ++cur[i];
        break;
      }
      cur[i] = 1;
      if (i == 0) return;
    }
  }
}

BigInt pow2(int e) { return BigInt(1) << e; }

}  // namespace

Rational parse_rational(const std::string& text) {
  auto bad = [&] { return ConfigError("cannot parse rational number '" + text + "'"); };
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) throw bad();
    return v;
  };
  std::string_view s(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(s.substr(0, slash));
    const auto den = parse_int(s.substr(slash + 1));
    if (den == 0) throw bad();
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    bool negative = !s.empty() && s.front() == '-';
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (fp.size() > 15 || fp.find_first_not_of("0123456789") != std::string_view::npos) throw bad();
    std::int64_t whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : parse_int(ip);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    std::int64_t frac = fp.empty() ? 0 : parse_int(fp);
    std::int64_t mag = (whole < 0 ? -whole : whole) * scale + frac;
    return Rational(negative ? -mag : mag, scale);
  }
  return Rational(parse_int(s), 1);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

MultiIndex::MultiIndex(std::vector<int> levels) : levels_(std::move(levels)) {
  require_valid_levels(levels_);
}

MultiIndex::MultiIndex(std::initializer_list<int> levels) : levels_(levels) {
  require_valid_levels(levels_);
}

int MultiIndex::l1() const { return std::accumulate(levels_.begin(), levels_.end(), 0); }

int MultiIndex::linf() const { return *std::max_element(levels_.begin(), levels_.end()); }

bool MultiIndex::leq(const MultiIndex& other) const {
  if (dim() != other.dim()) return false;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] > other.levels_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::with(int i, int level) const {
  auto copy = levels_;
  copy[static_cast<std::size_t>(i)] = level;
  return MultiIndex(std::move(copy));
}

std::string to_string(const MultiIndex& beta) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < beta.dim(); ++i) os << (i ? "," : "") << beta[i];
  os << ')';
  return os.str();
}

bool is_monotone(std::span<const MultiIndex> indices) {
  require_same_dim(indices);
  std::set<MultiIndex> members(indices.begin(), indices.end());
  // Downward closure is equivalent to closure under unit decrements.
  for (const auto& beta : members) {
    for (int i = 0; i < beta.dim(); ++i) {
      if (beta[i] > 1 && !members.count(beta.with(i, beta[i] - 1))) return false;
    }
  }
  return true;
}

bool MonotoneIndexSet::contains(const MultiIndex& beta) const { return find(beta) >= 0; }

std::ptrdiff_t MonotoneIndexSet::find(const MultiIndex& beta) const {
  if (beta.dim() != dim_) return -1;
  auto it = std::lower_bound(members_.begin(), members_.end(), beta, BlockOrder{});
  if (it == members_.end() || *it != beta) return -1;
  return it - members_.begin();
}

int MonotoneIndexSet::max_level() const {
  int k = 0;
  for (const auto& beta : members_) k = std::max(k, beta.linf());
  return k;
}

MonotoneIndexSet monotone_closure(std::span<const MultiIndex> indices) {
  require_same_dim(indices);
  if (indices.empty()) return {};
  std::set<MultiIndex> seen;
  std::vector<MultiIndex> work(indices.begin(), indices.end());
  while (!work.empty()) {
    MultiIndex beta = std::move(work.back());
    work.pop_back();
    if (!seen.insert(beta).second) continue;
    for (int i = 0; i < beta.dim(); ++i) {
      if (beta[i] > 1) work.push_back(beta.with(i, beta[i] - 1));
    }
  }
  std::vector<MultiIndex> sorted(seen.begin(), seen.end());
  std::sort(sorted.begin(), sorted.end(), BlockOrder{});
  return MonotoneIndexSet(indices.front().dim(), std::move(sorted));
}

MonotoneIndexSet make_full_grid(const MultiIndex& beta) {
  std::vector<MultiIndex> members;
  for_each_in_box(beta.levels(), [&](const MultiIndex& b) { members.push_back(b); });
  std::sort(members.begin(), members.end(), BlockOrder{});
  return MonotoneIndexSet(beta.dim(), std::move(members));
}

MonotoneIndexSet make_isotropic_full_grid(int k, int d) {
  if (k < 1 || d < 1) throw ConfigError("full grid requires k >= 1 and d >= 1");
  return make_full_grid(MultiIndex(std::vector<int>(static_cast<std::size_t>(d), k)));
}

MonotoneIndexSet make_standard_sparse(int k, int d) {
  if (k < 1 || d < 1) throw ConfigError("standard sparse grid requires k >= 1 and d >= 1");
  std::vector<MultiIndex> members;
  const int bound = k + d - 1;
  for_each_in_box(std::vector<int>(static_cast<std::size_t>(d), k), [&](const MultiIndex& b) {
    if (b.l1() <= bound) members.push_back(b);
  });
  std::sort(members.begin(), members.end(), BlockOrder{});
  return MonotoneIndexSet(d, std::move(members));
}

MonotoneIndexSet make_energy_optimized(int k, int d, const Rational& a) {
  if (k < 1 || d < 1) throw ConfigError("energy-optimized grid requires k >= 1 and d >= 1");
  if (a >= Rational(1)) throw ConfigError("energy-optimized grid requires a < 1, got " + to_string(a));
  const std::int64_t p = a.numerator();
  const std::int64_t q = a.denominator();
  // q|beta|_1 - p|beta|_inf <= (q - p)k + q(d - 1); admissible betas have |beta|_inf <= k.
  const std::int64_t rhs = (q - p) * k + q * (d - 1);
  std::vector<MultiIndex> members;
  for_each_in_box(std::vector<int>(static_cast<std::size_t>(d), k), [&](const MultiIndex& b) {
    if (q * b.l1() - p * b.linf() <= rhs) members.push_back(b);
  });
  std::sort(members.begin(), members.end(), BlockOrder{});
  return MonotoneIndexSet(d, std::move(members));
}

LevelPartition level_partition(std::span<const MultiIndex> indices) {
  if (indices.empty()) throw ConfigError("level partition of an empty index set");
  require_same_dim(indices);
  LevelPartition part;
  std::set<MultiIndex> unique(indices.begin(), indices.end());
  for (const auto& beta : unique) {
    part.slices[beta.linf()].push_back(beta);
    part.k_max = std::max(part.k_max, beta.linf());
  }
  for (auto& [k, slice] : part.slices) std::sort(slice.begin(), slice.end(), BlockOrder{});
  return part;
}

std::vector<MultiIndex> maximal_elements(std::span<const MultiIndex> slice) {
  require_same_dim(slice);
  std::vector<MultiIndex> out;
  for (const auto& beta : slice) {
    bool dominated = false;
    for (const auto& other : slice) {
      if (other != beta && beta.leq(other)) {
        dominated = true;
        break;
      }
    }
    if (!dominated && std::find(out.begin(), out.end(), beta) == out.end()) out.push_back(beta);
  }
  std::sort(out.begin(), out.end(), BlockOrder{});
  return out;
}

BoundsReport bounds_quantities(std::span<const MultiIndex> indices) {
  const LevelPartition part = level_partition(indices);
  BoundsReport report;
  report.k_lambda = part.k_max;
  for (const auto& [k, slice] : part.slices) {
    report.n_lambda = std::max(report.n_lambda, BigInt(slice.size()));
    auto maximal = maximal_elements(slice);
    for (const auto& beta : maximal) report.n_tilde += pow2(beta.l1() - beta.linf());
    report.maximal_sets.emplace(k, std::move(maximal));
    for (const auto& beta : slice) {
      report.n_tilde_prime = std::max(report.n_tilde_prime, pow2(beta.l1() - beta.linf()));
    }
  }
  return report;
}

int r0(int k, int d, const Rational& a) {
  if (k < 1 || d < 1) throw ConfigError("r0 requires k >= 1 and d >= 1");
  if (a >= Rational(1)) throw ConfigError("r0 requires a < 1");
  const std::int64_t p = a.numerator();
  const std::int64_t q = a.denominator();
  // Both numerator and denominator are positive for a < 1.
  const std::int64_t num = (q - p) * k + q * (d - 1);
  const std::int64_t den = q * d - p;
  return static_cast<int>(num / den);
}

GapExample gap_example(int k, int d) {
  if (k < 1 || d < 2) throw ConfigError("gap example requires k >= 1 and d >= 2");
  GapExample gap;
  for (const auto& tail : make_standard_sparse(k, d - 1)) {
    std::vector<int> levels{2 * k};
    levels.insert(levels.end(), tail.levels().begin(), tail.levels().end());
    gap.literal.emplace_back(std::move(levels));
  }
  std::sort(gap.literal.begin(), gap.literal.end(), BlockOrder{});
  gap.closure = monotone_closure(gap.literal);
  gap.literal_bounds = bounds_quantities(gap.literal);
  gap.closure_bounds = bounds_quantities(gap.closure);
  return gap;
}

MonotoneIndexSet read_index_file(std::istream& in, std::ostream& diagnostics) {
  std::vector<MultiIndex> indices;
  std::string line;
  int line_no = 0;
  int d = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<int> levels;
    std::string tok;
    while (ls >> tok) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ConfigError("index file line " + std::to_string(line_no) + ": not an integer '" + tok + "'");
      }
      levels.push_back(v);
    }
    if (d == 0) d = static_cast<int>(levels.size());
    if (static_cast<int>(levels.size()) != d) {
      throw ConfigError("index file line " + std::to_string(line_no) + ": expected " + std::to_string(d) +
                        " levels, got " + std::to_string(levels.size()));
    }
    try {
      indices.emplace_back(std::move(levels));
    } catch (const ConfigError& e) {
      throw ConfigError("index file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (indices.empty()) throw ConfigError("index file contains no multi-indices");
  if (!is_monotone(indices)) {
    diagnostics << "warning: index set is not downward closed; using its monotone closure\n";
  }
  return monotone_closure(indices);
}

}  // namespace sghb
