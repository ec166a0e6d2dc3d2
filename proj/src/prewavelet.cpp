#include "sghb/prewavelet.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sghb/errors.hpp"

namespace sghb {

Eigen::MatrixXd to_dense(const CsrMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (auto p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      out(static_cast<Eigen::Index>(i), a.col()[static_cast<std::size_t>(p)]) = a.val()[static_cast<std::size_t>(p)];
    }
  }
  return out;
}

namespace {

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw NumericalError("prewavelet oracle: dimension " + std::to_string(n) + " exceeds dense cap " +
                         std::to_string(cap));
  }
}

}  // namespace

PrewaveletBasis::PrewaveletBasis(const GalerkinSystem& system, std::size_t dense_cap) : space_(system.space) {
  check_cap(system.dim(), dense_cap);
  mass_ = to_dense(system.mass);
  const auto& sp = *space_;
  const auto n = static_cast<Eigen::Index>(sp.dim());
  q_.resize(sp.num_blocks());
  for (std::size_t b = 0; b < sp.num_blocks(); ++b) {
    const auto& beta = sp.block(b);
    // U: all functions of blocks strictly below beta.
    std::vector<Eigen::Index> u;
    for (std::size_t o = 0; o < sp.num_blocks(); ++o) {
      if (o == b || !sp.block(o).leq(beta)) continue;
      for (std::size_t g = sp.block_start(o); g < sp.block_start(o) + sp.block_size(o); ++g) {
        u.push_back(static_cast<Eigen::Index>(g));
      }
    }
    const auto start = static_cast<Eigen::Index>(sp.block_start(b));
    const auto m = static_cast<Eigen::Index>(sp.block_size(b));
    const auto nu = static_cast<Eigen::Index>(u.size());

    // Complement vectors: e_j - P_U e_j for the functions j of block beta.
    Eigen::MatrixXd vecs = Eigen::MatrixXd::Zero(n, m);
    vecs.block(start, 0, m, m).setIdentity();
    if (nu > 0) {
      Eigen::MatrixXd muu(nu, nu), mub(nu, m);
      for (Eigen::Index i = 0; i < nu; ++i) {
        for (Eigen::Index j = 0; j < nu; ++j) muu(i, j) = mass_(u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(j)]);
        for (Eigen::Index j = 0; j < m; ++j) mub(i, j) = mass_(u[static_cast<std::size_t>(i)], start + j);
      }
      Eigen::LLT<Eigen::MatrixXd> llt(muu);
      if (llt.info() != Eigen::Success) throw NumericalError("prewavelet oracle: singular coarse mass matrix");
      const Eigen::MatrixXd y = llt.solve(mub);
      for (Eigen::Index i = 0; i < nu; ++i) vecs.row(u[static_cast<std::size_t>(i)]) = -y.row(i);
    }
    const Eigen::MatrixXd gram = vecs.transpose() * mass_ * vecs;
    Eigen::LLT<Eigen::MatrixXd> chol(gram);
    const double scale = gram.diagonal().maxCoeff();
    if (chol.info() != Eigen::Success || chol.matrixLLT().diagonal().minCoeff() <= 1e-10 * std::sqrt(scale)) {
      throw NumericalError("prewavelet oracle: rank deficiency in W" + to_string(beta));
    }
    // Q = V L^-T has M-orthonormal columns.
    q_[b] = chol.matrixU().transpose().solve(vecs.transpose()).transpose();
  }
}

PWDecomposition pw_decompose(const PrewaveletBasis& pw, const HBVector& c) {
  if (c.space.get() != pw.space().get() && c.size() != pw.space()->dim()) {
    throw ConfigError("pw_decompose: vector does not belong to the prewavelet space");
  }
  const auto& sp = *pw.space();
  const Eigen::Map<const Eigen::VectorXd> v(c.values.data(), static_cast<Eigen::Index>(c.size()));
  const Eigen::VectorXd mv = pw.mass() * v;
  PWDecomposition dec;
  dec.space = pw.space();
  for (std::size_t b = 0; b < sp.num_blocks(); ++b) {
    const Eigen::VectorXd coef = pw.basis(b).transpose() * mv;
    const Eigen::VectorXd w = pw.basis(b) * coef;
    dec.components.emplace_back(w.data(), w.data() + w.size());
    dec.l2_sq.push_back(coef.squaredNorm());
  }
  return dec;
}

PWDecomposition pw_decompose(const HBVector& c, std::size_t dense_cap) {
  check_cap(c.size(), dense_cap);
  const PrewaveletBasis pw(assemble_system(c.space), dense_cap);
  return pw_decompose(pw, c);
}

double pw_norm_sq(const PWDecomposition& dec) {
  double s = 0.0;
  for (std::size_t b = 0; b < dec.l2_sq.size(); ++b) {
    s += std::ldexp(1.0, 2 * dec.space->block(b).linf()) * dec.l2_sq[b];
  }
  return s;
}

Eigen::MatrixXd pw_norm_matrix(const PrewaveletBasis& pw) {
  const auto& sp = *pw.space();
  const auto n = static_cast<Eigen::Index>(sp.dim());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t b = 0; b < sp.num_blocks(); ++b) {
    const Eigen::MatrixXd mq = pw.mass() * pw.basis(b);
    p.selfadjointView<Eigen::Lower>().rankUpdate(mq, std::ldexp(1.0, 2 * sp.block(b).linf()));
  }
  return p.selfadjointView<Eigen::Lower>();
}

PWConstants pencil_extremes(const Eigen::MatrixXd& g, const Eigen::MatrixXd& p) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(g, p, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("prewavelet oracle: pencil eigensolve failed");
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

PWConstants estimate_pw_constants(const GalerkinSystem& system, std::size_t dense_cap) {
  const PrewaveletBasis pw(system, dense_cap);
  return pencil_extremes(to_dense(system.stiffness), pw_norm_matrix(pw));
}

PWConstants estimate_pw_constants(const SpacePtr& space, std::size_t dense_cap) {
  check_cap(space->dim(), dense_cap);
  return estimate_pw_constants(assemble_system(space), dense_cap);
}

}  // namespace sghb
