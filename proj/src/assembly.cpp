#include "sghb/assembly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <thread>

#include "sghb/errors.hpp"

namespace sghb {

double mass_1d(const Hat1D& a, const Hat1D& b) {
  if (a.level == b.level) return a.offset == b.offset ? (2.0 / 3.0) * std::ldexp(1.0, -a.level) : 0.0;
  // The coarser hat is linear on the finer hat's support, so the integral is
  // its value at the finer node times the finer hat's area.
  const Hat1D& coarse = a.level < b.level ? a : b;
  const Hat1D& fine = a.level < b.level ? b : a;
  const double node = std::ldexp(static_cast<double>(2 * fine.offset + 1), -fine.level);
  return evaluate(coarse, node) * std::ldexp(1.0, -fine.level);
}

double stiffness_1d(const Hat1D& a, const Hat1D& b) {
  if (a.level == b.level && a.offset == b.offset) return std::ldexp(1.0, a.level + 1);
  return 0.0;
}

double mass_entry(const BasisFunction& f, const BasisFunction& g) {
  if (f.dim() != g.dim()) throw ConfigError("basis functions of different dimension");
  double m = 1.0;
  for (int j = 0; j < f.dim() && m != 0.0; ++j) m *= mass_1d(f.factor(j), g.factor(j));
  return m;
}

double stiffness_entry(const BasisFunction& f, const BasisFunction& g) {
  if (f.dim() != g.dim()) throw ConfigError("basis functions of different dimension");
  const int d = f.dim();
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    double term = stiffness_1d(f.factor(i), g.factor(i));
    for (int j = 0; j < d && term != 0.0; ++j) {
      if (j != i) term *= mass_1d(f.factor(j), g.factor(j));
    }
    total += term;
  }
  return total;
}

CsrMatrix::CsrMatrix(std::size_t n, std::vector<std::int64_t> row_ptr, std::vector<std::int32_t> col,
                     std::vector<double> val)
    : n_(n), row_ptr_(std::move(row_ptr)), col_(std::move(col)), val_(std::move(val)) {
  if (row_ptr_.size() != n_ + 1 || col_.size() != val_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != val_.size()) {
    throw ConfigError("inconsistent CSR arrays");
  }
}

double CsrMatrix::entry(std::size_t i, std::size_t j) const {
  const auto b = col_.begin() + row_ptr_[i];
  const auto e = col_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(j));
  if (it == e || *it != static_cast<std::int32_t>(j)) return 0.0;
  return val_[static_cast<std::size_t>(it - col_.begin())];
}

void CsrMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw ConfigError("matrix-vector size mismatch");
  kernels::parallel_spmv(view(), n_, x.data(), y.data());
}

std::vector<double> CsrMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(n_);
  apply(x, y);
  return y;
}

double CsrMatrix::quadratic_form(std::span<const double> x) const {
  const auto y = apply(x);
  return kernels::active().dot(x.data(), y.data(), n_);
}

namespace {

enum class Form { mass, stiffness };

// Overlapping offset range of block `other` along one dimension for a
// function of level `level` with offset `offset`.
struct Range {
  std::int64_t first;
  std::int64_t count;
};

Range overlap_range(int level, std::int64_t offset, int other_level) {
  if (other_level >= level) {
    const int shift = other_level - level;
    return {offset << shift, std::int64_t{1} << shift};
  }
  return {offset >> (level - other_level), 1};
}

struct RowChunk {
  std::vector<std::int64_t> row_len;
  std::vector<std::int32_t> col;
  std::vector<double> val;
};

void assemble_rows(const SparseGridSpace& space, Form form, double drop, std::size_t row_begin, std::size_t row_end,
                   RowChunk& out) {
  const int d = space.d();
  const auto ud = static_cast<std::size_t>(d);
  std::vector<std::vector<double>> m1(ud), k1(ud);
  std::vector<Range> ranges(ud);
  std::vector<std::int64_t> idx(ud);
  for (std::size_t row = row_begin; row < row_end; ++row) {
    const BasisFunction f = space.function(row);
    std::size_t len = 0;
    for (std::size_t b = 0; b < space.num_blocks(); ++b) {
      const auto& other = space.block(b);
      bool stiff_possible = false;
      for (std::size_t j = 0; j < ud; ++j) {
        const int jj = static_cast<int>(j);
        ranges[j] = overlap_range(f.block[jj], f.offsets[j], other[jj]);
        m1[j].resize(static_cast<std::size_t>(ranges[j].count));
        k1[j].resize(static_cast<std::size_t>(ranges[j].count));
        for (std::int64_t t = 0; t < ranges[j].count; ++t) {
          const Hat1D g{other[jj], ranges[j].first + t};
          m1[j][static_cast<std::size_t>(t)] = mass_1d(f.factor(jj), g);
          k1[j][static_cast<std::size_t>(t)] = stiffness_1d(f.factor(jj), g);
        }
        stiff_possible = stiff_possible || other[jj] == f.block[jj];
      }
      // A stiffness term needs equal levels in at least one dimension.
      if (form == Form::stiffness && !stiff_possible) continue;
      // Row-major walk over the tensor range gives increasing columns.
      std::fill(idx.begin(), idx.end(), 0);
      std::vector<std::size_t> strides(ud);
      std::size_t s = 1;
      for (std::size_t j = ud; j-- > 0;) {
        strides[j] = s;
        s *= static_cast<std::size_t>(std::int64_t{1} << (other[static_cast<int>(j)] - 1));
      }
      while (true) {
        double value = 0.0;
        std::size_t local = 0;
        for (std::size_t j = 0; j < ud; ++j) {
          local += static_cast<std::size_t>(ranges[j].first + idx[j]) * strides[j];
        }
        if (form == Form::mass) {
          value = 1.0;
          for (std::size_t j = 0; j < ud; ++j) value *= m1[j][static_cast<std::size_t>(idx[j])];
        } else {
          for (std::size_t i = 0; i < ud; ++i) {
            double term = k1[i][static_cast<std::size_t>(idx[i])];
            for (std::size_t j = 0; j < ud && term != 0.0; ++j) {
              if (j != i) term *= m1[j][static_cast<std::size_t>(idx[j])];
            }
            value += term;
          }
        }
        if (std::abs(value) > drop) {
          out.col.push_back(static_cast<std::int32_t>(space.block_start(b) + local));
          out.val.push_back(value);
          ++len;
        }
        std::size_t j = ud;
        bool done = true;
        while (j > 0) {
          --j;
          if (++idx[j] < ranges[j].count) {
            done = false;
            break;
          }
          idx[j] = 0;
        }
        if (done) break;
      }
    }
    out.row_len.push_back(static_cast<std::int64_t>(len));
  }
}

SymmetricSparseMatrix assemble(const SparseGridSpace& space, Form form, const AssemblyOptions& opts) {
  const std::size_t estimate = overlap_count(space);
  if (estimate > opts.nnz_cap) {
    throw NumericalError("assembly would store " + std::to_string(estimate) + " entries, above the cap of " +
                         std::to_string(opts.nnz_cap));
  }
  const std::size_t n = space.dim();
  const auto workers = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(kernels::num_threads()), n / 64));
  std::vector<RowChunk> chunks(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = std::min(n, w * chunk);
    const std::size_t e = std::min(n, b + chunk);
    pool.emplace_back([&, w, b, e] { assemble_rows(space, form, opts.drop_tolerance, b, e, chunks[w]); });
  }
  assemble_rows(space, form, opts.drop_tolerance, 0, std::min(n, chunk), chunks[0]);
  for (auto& t : pool) t.join();

  std::vector<std::int64_t> row_ptr{0};
  row_ptr.reserve(n + 1);
  std::vector<std::int32_t> col;
  std::vector<double> val;
  for (auto& c : chunks) {
    for (auto len : c.row_len) row_ptr.push_back(row_ptr.back() + len);
    col.insert(col.end(), c.col.begin(), c.col.end());
    val.insert(val.end(), c.val.begin(), c.val.end());
  }
  return CsrMatrix(n, std::move(row_ptr), std::move(col), std::move(val));
}

}  // namespace

std::size_t overlap_count(const SparseGridSpace& space) {
  std::size_t total = 0;
  for (const auto& a : space.index_set()) {
    for (const auto& b : space.index_set()) {
      int e = 0;
      for (int j = 0; j < a.dim(); ++j) e += std::max(a[j], b[j]) - 1;
      total += std::size_t{1} << e;
    }
  }
  return total;
}

SymmetricSparseMatrix assemble_stiffness(const SparseGridSpace& space, const AssemblyOptions& opts) {
  return assemble(space, Form::stiffness, opts);
}

SymmetricSparseMatrix assemble_mass(const SparseGridSpace& space, const AssemblyOptions& opts) {
  return assemble(space, Form::mass, opts);
}

std::vector<double> scaling_diagonal(const SparseGridSpace& space) {
  std::vector<double> diag(space.dim());
  for (std::size_t b = 0; b < space.num_blocks(); ++b) {
    const auto& beta = space.block(b);
    const double w = std::ldexp(1.0, 2 * beta.linf()) * l2_norm_sq(beta);
    std::fill_n(diag.begin() + static_cast<std::ptrdiff_t>(space.block_start(b)), space.block_size(b), w);
  }
  return diag;
}

GalerkinSystem assemble_system(const SpacePtr& space, const AssemblyOptions& opts) {
  GalerkinSystem sys;
  sys.space = space;
  sys.stiffness = assemble_stiffness(*space, opts);
  sys.mass = assemble_mass(*space, opts);
  sys.scaling = scaling_diagonal(*space);
  sys.inv_sqrt_scaling.resize(sys.scaling.size());
  std::transform(sys.scaling.begin(), sys.scaling.end(), sys.inv_sqrt_scaling.begin(),
                 [](double s) { return 1.0 / std::sqrt(s); });
  return sys;
}

double hb_norm_sq(const HBVector& c) {
  const auto diag = scaling_diagonal(*c.space);
  double s = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) s += diag[i] * c.values[i] * c.values[i];
  return s;
}

Norms norms(const HBVector& c, const GalerkinSystem& system) {
  if (c.size() != system.dim()) throw ConfigError("vector does not match the Galerkin system");
  Norms out;
  out.l2_sq = system.mass.quadratic_form(c.values);
  out.h1_sq = system.stiffness.quadratic_form(c.values);
  for (std::size_t i = 0; i < c.size(); ++i) out.hb_sq += system.scaling[i] * c.values[i] * c.values[i];
  return out;
}

void preconditioned_apply(const GalerkinSystem& system, std::span<const double> x, std::span<double> y) {
  const std::size_t n = system.dim();
  if (x.size() != n || y.size() != n) throw ConfigError("preconditioned apply: size mismatch");
  const auto& k = kernels::active();
  std::vector<double> tmp(n);
  k.hadamard(system.inv_sqrt_scaling.data(), x.data(), tmp.data(), n);
  kernels::parallel_spmv(system.stiffness.view(), n, tmp.data(), y.data());
  k.hadamard(system.inv_sqrt_scaling.data(), y.data(), y.data(), n);
}

std::vector<double> preconditioned_apply(const GalerkinSystem& system, std::span<const double> x) {
  std::vector<double> y(system.dim());
  preconditioned_apply(system, x, y);
  return y;
}

void write_coordinate(const CsrMatrix& a, std::ostream& out) {
  char buf[64];
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (auto k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      const auto res = std::to_chars(buf, buf + sizeof buf, a.val()[static_cast<std::size_t>(k)]);
      out << r << ' ' << a.col()[static_cast<std::size_t>(k)] << ' ' << std::string_view(buf, res.ptr) << '\n';
    }
  }
}

}  // namespace sghb
