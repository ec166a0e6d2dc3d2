#include "sghb/basis.hpp"

#include <cmath>

#include "sghb/errors.hpp"

namespace sghb {

double DyadicCoord::value() const { return std::ldexp(static_cast<double>(numerator), -level); }

DyadicCoord DyadicCoord::reduced() const {
  if (numerator == 0) return {0, 0};
  DyadicCoord r = *this;
  while (r.level > 0 && (r.numerator & 1) == 0) {
    r.numerator >>= 1;
    --r.level;
  }
  return r;
}

std::vector<double> NodalPoint::values() const {
  std::vector<double> v;
  v.reserve(coords.size());
  for (const auto& c : coords) v.push_back(c.value());
  return v;
}

double evaluate(const Hat1D& h, double t) {
  return hat(std::ldexp(t, h.level) - static_cast<double>(2 * h.offset + 1));
}

NodalPoint BasisFunction::node() const {
  NodalPoint p;
  p.coords.reserve(offsets.size());
  for (int j = 0; j < dim(); ++j) p.coords.push_back({2 * offsets[static_cast<std::size_t>(j)] + 1, block[j]});
  return p;
}

std::size_t block_size(const MultiIndex& beta) { return std::size_t{1} << (beta.l1() - beta.dim()); }

std::vector<BasisFunction> enumerate_block(const MultiIndex& beta) {
  const auto d = static_cast<std::size_t>(beta.dim());
  std::vector<BasisFunction> out;
  out.reserve(block_size(beta));
  std::vector<std::int64_t> offsets(d, 0);
  while (true) {
    out.push_back({beta, offsets});
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (offsets[j] + 1 < (std::int64_t{1} << (beta[static_cast<int>(j)] - 1))) {
        ++offsets[j];
        break;
      }
      offsets[j] = 0;
      if (j == 0) return out;
    }
  }
}

double evaluate(const BasisFunction& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim()) throw ConfigError("evaluation point has wrong dimension");
  double v = 1.0;
  for (int j = 0; j < f.dim() && v != 0.0; ++j) v *= evaluate(f.factor(j), x[static_cast<std::size_t>(j)]);
  return v;
}

std::vector<NodalPoint> nodal_points(const MultiIndex& beta) {
  const auto d = static_cast<std::size_t>(beta.dim());
  std::vector<NodalPoint> out;
  std::vector<std::int64_t> num(d, 1);
  while (true) {
    NodalPoint p;
    for (std::size_t j = 0; j < d; ++j) p.coords.push_back({num[j], beta[static_cast<int>(j)]});
    out.push_back(std::move(p));
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (num[j] + 1 < (std::int64_t{1} << beta[static_cast<int>(j)])) {
        ++num[j];
        break;
      }
      num[j] = 1;
      if (j == 0) return out;
    }
  }
}

double l2_norm_sq(const MultiIndex& beta) {
  const int d = beta.dim();
  return std::pow(2.0 / 3.0, d) * std::ldexp(1.0, -beta.l1());
}

double h1_norm_sq(const MultiIndex& beta) {
  const int d = beta.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += std::ldexp(1.0, 2 * beta[i]);
  return std::ldexp(1.0, d) / std::pow(3.0, d - 1) * std::ldexp(1.0, -beta.l1()) * s;
}

double block_l2_norm_sq(const MultiIndex& beta, std::span<const double> coeffs) {
  if (coeffs.size() != block_size(beta)) {
    throw ConfigError("block " + to_string(beta) + " has " + std::to_string(block_size(beta)) +
                      " functions, got " + std::to_string(coeffs.size()) + " coefficients");
  }
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return l2_norm_sq(beta) * s;
}

}  // namespace sghb
