#pragma once

// Dense complex Hermitian matrices and the spectral primitives used across the
// library: extreme eigenpairs, operator norm and real quadratic forms.
//
// Two eigensolver paths share one accuracy contract. Up to `dense_limit` the
// full dense decomposition from Eigen is used; above it a Lanczos iteration with
// full reorthogonalization and explicit locking computes one eigenpair at a
// time, which keeps repeated eigenvalues (complete-graph Laplacians have one of
// multiplicity n-1) from being collapsed into a single Ritz value.

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "angsync/error.hpp"

namespace angsync {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Largest |M_ij - conj(M_ji)| over all entries.
inline double max_asymmetry(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

/// Immutable dense Hermitian matrix. The stored entries are exactly Hermitian:
/// the constructor validates near-Hermitian input and then symmetrizes it, so
/// the diagonal is exactly real and M_ij == conj(M_ji) bit for bit.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Accepts a square matrix whose asymmetry is at most `asym_tol` relative to
  /// max(1, max |M_ij|).
  explicit HermitianMatrix(const ComplexMatrix& m, double asym_tol = 1e-12) {
    detail::require_dims(m.rows() == m.cols(), "HermitianMatrix: matrix is not square");
    detail::require_dims(m.rows() >= 1, "HermitianMatrix: empty matrix");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (max_asymmetry(m) > asym_tol * scale)
      throw Error("HermitianMatrix: input is not Hermitian (asymmetry " +
                  std::to_string(max_asymmetry(m)) + ")");
    m_ = hermitian_part(m);
  }

  static HermitianMatrix zero(int n) { return HermitianMatrix(ComplexMatrix::Zero(n, n)); }
  static HermitianMatrix identity(int n) { return HermitianMatrix(ComplexMatrix::Identity(n, n)); }

  /// v v*
  static HermitianMatrix rank_one(const ComplexVector& v) {
    return HermitianMatrix(ComplexMatrix(v * v.adjoint()));
  }

  static HermitianMatrix diagonal(const RealVector& d) {
    return HermitianMatrix(ComplexMatrix(d.cast<Complex>().asDiagonal()));
  }

  /// Real symmetric input embedded with zero imaginary parts.
  static HermitianMatrix from_real(const RealMatrix& m, double asym_tol = 1e-12) {
    return HermitianMatrix(ComplexMatrix(m.cast<Complex>()), asym_tol);
  }

  int size() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  ComplexVector apply(const ComplexVector& v) const {
    detail::require_dims(v.size() == m_.rows(), "HermitianMatrix::apply: dimension mismatch");
    return m_ * v;
  }

  /// True when every imaginary part is exactly zero.
  bool is_real() const { return m_.imag().cwiseAbs().maxCoeff() == 0.0; }

  /// (M + M*) / 2 with the diagonal forced real.
  static ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    ComplexMatrix h = (m + m.adjoint()) * 0.5;
    // (a + conj(a))/2 is real in exact arithmetic; make it so in floating point
    // and make the two triangles exact conjugates of each other.
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      h(j, j) = Complex(h(j, j).real(), 0.0);
      for (Eigen::Index i = 0; i < j; ++i) h(j, i) = std::conj(h(i, j));
    }
    return h;
  }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    detail::require_dims(a.size() == b.size(), "HermitianMatrix +: dimension mismatch");
    return HermitianMatrix(ComplexMatrix(a.m_ + b.m_));
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    detail::require_dims(a.size() == b.size(), "HermitianMatrix -: dimension mismatch");
    return HermitianMatrix(ComplexMatrix(a.m_ - b.m_));
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    return HermitianMatrix(ComplexMatrix(s * a.m_));
  }

  /// H + c I
  HermitianMatrix shifted(double c) const {
    ComplexMatrix m = m_;
    m.diagonal().array() += c;
    return HermitianMatrix(m);
  }

 private:
  ComplexMatrix m_;
};

/// (M + M*)/2; rejects non-square input.
inline HermitianMatrix symmetrize(const ComplexMatrix& m) {
  detail::require_dims(m.rows() == m.cols(), "symmetrize: matrix is not square");
  detail::require_dims(m.rows() >= 1, "symmetrize: empty matrix");
  return HermitianMatrix(HermitianMatrix::hermitian_part(m));
}

/// Eigenpairs sorted by ascending eigenvalue. Column k of `vectors` pairs with
/// values[k]; residuals[k] = ||H v_k - values[k] v_k||_2.
struct EigenResult {
  RealVector values;
  ComplexMatrix vectors;
  RealVector residuals;
};

enum class EigMethod { Auto, Dense, Lanczos };

struct EigOptions {
  EigMethod method = EigMethod::Auto;
  /// Auto uses the dense decomposition up to this dimension.
  int dense_limit = 2048;
  /// Start-vector seed for the Lanczos path.
  std::uint64_t seed = 0x5eed;
};

namespace detail {

inline RealVector residual_norms(const HermitianMatrix& h, const RealVector& values,
                                 const ComplexMatrix& vectors) {
  RealVector r(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k)
    r(k) = (h.matrix() * vectors.col(k) - values(k) * vectors.col(k)).norm();
  return r;
}

inline EigenResult dense_extreme(const HermitianMatrix& h, int k_small, int k_large) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success)
    throw ConvergenceError("extreme_eigs: dense eigendecomposition failed");
  const int n = h.size();
  const int k = k_small + k_large;
  EigenResult out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k_small; ++i) {
    out.values(i) = es.eigenvalues()(i);
    out.vectors.col(i) = es.eigenvectors().col(i);
  }
  for (int i = 0; i < k_large; ++i) {
    const int src = n - k_large + i;
    out.values(k_small + i) = es.eigenvalues()(src);
    out.vectors.col(k_small + i) = es.eigenvectors().col(src);
  }
  out.residuals = residual_norms(h, out.values, out.vectors);
  return out;
}

struct RitzPair {
  double value;
  ComplexVector vector;
};

// Smallest eigenpair of sign*H restricted to the orthogonal complement of
// `locked` (whose columns are orthonormal approximate eigenvectors).
inline RitzPair lanczos_lowest(const HermitianMatrix& h, double sign, const ComplexMatrix& locked,
                               double tol, std::mt19937_64& rng) {
  const Eigen::Index n = h.size();
  const Eigen::Index max_dim = n - locked.cols();
  if (max_dim <= 0) throw Error("lanczos: nothing left to compute");

  auto orthogonalize = [&](ComplexVector& w, const ComplexMatrix& basis, Eigen::Index cols) {
    for (int pass = 0; pass < 2; ++pass) {
      if (locked.cols() > 0) w -= locked * (locked.adjoint() * w);
      if (cols > 0) w -= basis.leftCols(cols) * (basis.leftCols(cols).adjoint() * w);
    }
  };

  ComplexMatrix basis(n, std::min<Eigen::Index>(max_dim, 64));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto fresh_vector = [&](Eigen::Index cols) {
    ComplexVector r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = Complex(normal(rng), normal(rng));
    orthogonalize(r, basis, cols);
    return ComplexVector(r / r.norm());
  };
  ComplexVector v = fresh_vector(0);

  std::vector<double> alpha;
  std::vector<double> beta;
  double norm_est = 0.0;
  Eigen::Index dim = 0;
  while (true) {
    if (dim == basis.cols()) {
      ComplexMatrix grown(n, std::min<Eigen::Index>(max_dim, 2 * basis.cols()));
      grown.leftCols(dim) = basis.leftCols(dim);
      basis = std::move(grown);
    }
    basis.col(dim) = v;
    ++dim;
    ComplexVector w = sign * (h.matrix() * v);
    const double hv = w.norm();
    alpha.push_back(v.dot(w).real());
    orthogonalize(w, basis, dim);
    // An invariant subspace was found when w vanishes relative to H v; the
    // recurrence then continues from a fresh orthogonal vector with beta = 0.
    const bool exhausted = dim == max_dim;
    const bool breakdown = w.norm() <= 1e-12 * std::max({hv, norm_est, 1e-300});
    const double b = breakdown ? 0.0 : w.norm();
    beta.push_back(b);
    if (dim % 8 != 0 && !exhausted && !breakdown) {
      v = w / b;
      continue;
    }

    RealMatrix t = RealMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < dim) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> tes(t);
    if (tes.info() != Eigen::Success) throw ConvergenceError("lanczos: tridiagonal solve failed");
    norm_est = std::max({norm_est, std::abs(tes.eigenvalues()(0)),
                         std::abs(tes.eigenvalues()(dim - 1))});
    const double target =
        tol * std::min(static_cast<double>(n), std::max(1.0, norm_est));
    const double theta = tes.eigenvalues()(0);
    const double estimate = b * std::abs(tes.eigenvectors()(dim - 1, 0));
    if (estimate <= target || exhausted) {
      ComplexVector y = basis.leftCols(dim) * tes.eigenvectors().col(0).cast<Complex>();
      y.normalize();
      const double resid = (sign * (h.matrix() * y) - theta * y).norm();
      if (resid <= target) return {sign * theta, y};
      if (exhausted)
        throw ConvergenceError("lanczos: residual " + std::to_string(resid) +
                               " above target " + std::to_string(target));
    }
    v = breakdown ? fresh_vector(dim) : ComplexVector(w / b);
  }
}

inline EigenResult lanczos_extreme(const HermitianMatrix& h, int k_small, int k_large, double tol,
                                   std::uint64_t seed) {
  const int n = h.size();
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, ComplexVector>> pairs;

  auto run = [&](double sign, int count) {
    ComplexMatrix locked(n, 0);
    for (const auto& p : pairs) {
      locked.conservativeResize(n, locked.cols() + 1);
      locked.col(locked.cols() - 1) = p.second;
    }
    // Pairs from the other end are locked too, so the two ends never overlap.
    for (int i = 0; i < count; ++i) {
      RitzPair rp = lanczos_lowest(h, sign, locked, tol, rng);
      locked.conservativeResize(n, locked.cols() + 1);
      locked.col(locked.cols() - 1) = rp.vector;
      pairs.emplace_back(rp.value, std::move(rp.vector));
    }
  };
  run(1.0, k_small);
  run(-1.0, k_large);

  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pairs[a].first < pairs[b].first; });
  EigenResult out;
  const auto k = static_cast<Eigen::Index>(pairs.size());
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.values(i) = pairs[order[i]].first;
    out.vectors.col(i) = pairs[order[i]].second;
  }
  out.residuals = residual_norms(h, out.values, out.vectors);
  return out;
}

inline bool use_dense(const HermitianMatrix& h, const EigOptions& opts) {
  switch (opts.method) {
    case EigMethod::Dense: return true;
    case EigMethod::Lanczos: return false;
    case EigMethod::Auto: break;
  }
  return h.size() <= opts.dense_limit;
}

}  // namespace detail

/// The k_small smallest and k_large largest eigenpairs of H, ascending.
/// Throws ConvergenceError when the iterative path misses its residual target.
inline EigenResult extreme_eigs(const HermitianMatrix& h, int k_small, int k_large, double tol,
                                const EigOptions& opts = {}) {
  detail::require(k_small >= 0 && k_large >= 0 && k_small + k_large <= h.size(),
                  "extreme_eigs: need 0 <= k_small + k_large <= n");
  detail::require(tol > 0.0, "extreme_eigs: tol must be positive");
  if (k_small + k_large == 0) return {RealVector(0), ComplexMatrix(h.size(), 0), RealVector(0)};
  if (detail::use_dense(h, opts)) return detail::dense_extreme(h, k_small, k_large);
  return detail::lanczos_extreme(h, k_small, k_large, tol, opts.seed);
}

/// All eigenvalues, ascending (dense only, no vectors).
inline RealVector eigenvalues(const HermitianMatrix& h) {
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.matrix().real(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw ConvergenceError("eigenvalues: dense eigendecomposition failed");
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("eigenvalues: dense eigendecomposition failed");
  return es.eigenvalues();
}

/// The two smallest eigenvalues; vectors are skipped on the dense path.
inline std::pair<double, double> two_smallest_eigenvalues(const HermitianMatrix& h, double tol,
                                                          const EigOptions& opts = {}) {
  detail::require(h.size() >= 2, "two_smallest_eigenvalues: need n >= 2");
  if (detail::use_dense(h, opts)) {
    const RealVector ev = eigenvalues(h);
    return {ev(0), ev(1)};
  }
  const EigenResult r = extreme_eigs(h, 2, 0, tol, opts);
  return {r.values(0), r.values(1)};
}

/// max(|lambda_min|, |lambda_max|)
inline double operator_norm(const HermitianMatrix& h, double tol, const EigOptions& opts = {}) {
  detail::require(tol > 0.0, "operator_norm: tol must be positive");
  if (detail::use_dense(h, opts)) {
    const RealVector ev = eigenvalues(h);
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }
  if (h.size() == 1) return std::abs(h(0, 0).real());
  const EigenResult r = extreme_eigs(h, 1, 1, tol, opts);
  return std::max(std::abs(r.values(0)), std::abs(r.values(1)));
}

/// Re(v* H v). The discarded imaginary part is pure rounding for Hermitian H.
inline double quad_form(const HermitianMatrix& h, const ComplexVector& v) {
  detail::require_dims(v.size() == h.size(), "quad_form: dimension mismatch");
  const Complex q = v.dot(h.matrix() * v);
  assert(std::abs(q.imag()) <= 1e-10 * h.matrix().norm() * v.squaredNorm() + 1e-300);
  return q.real();
}

}  // namespace angsync
