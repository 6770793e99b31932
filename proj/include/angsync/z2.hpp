#pragma once

// Real +-1 synchronization: C = z z^T + sigma W with W real symmetric Wigner
// noise. Exact recovery of z by the real relaxation is certified by
//
//   S = n I - z z^T + sigma (diag(z .* W z) - W),
//
// which for z = 1 is the complete-graph Laplacian plus sigma times the
// Laplacian-like matrix diag(W 1) - W.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "angsync/hermitian.hpp"
#include "angsync/rng.hpp"

namespace angsync {

/// Vector with entries in {+1, -1}.
class SignVector {
 public:
  SignVector() = default;

  explicit SignVector(RealVector v) : v_(std::move(v)) {
    detail::require_dims(v_.size() >= 1, "SignVector: empty vector");
    for (Eigen::Index i = 0; i < v_.size(); ++i)
      if (v_(i) != 1.0 && v_(i) != -1.0)
        throw Error("SignVector: entry " + std::to_string(i) + " is not +-1");
  }

  static SignVector ones(int n) { return SignVector(RealVector::Ones(n)); }

  int size() const { return static_cast<int>(v_.size()); }
  const RealVector& values() const { return v_; }
  double operator[](Eigen::Index i) const { return v_(i); }
  ComplexVector as_complex() const { return v_.cast<Complex>(); }

 private:
  RealVector v_;
};

/// Uniformly random signs.
inline SignVector random_signs(int n, std::uint64_t seed) {
  detail::require(n >= 1, "random_signs: need n >= 1");
  CounterRng rng(seed, StreamPurpose::RealSignal);
  RealVector v(n);
  for (int i = 0; i < n; ++i) v(i) = (rng() >> 63) ? -1.0 : 1.0;
  return SignVector(std::move(v));
}

/// Real symmetric, zero diagonal, W_ij ~ N(0, 1) i.i.d. above the diagonal.
inline HermitianMatrix sample_real_wigner(int n, std::uint64_t seed) {
  detail::require(n >= 2, "sample_real_wigner: need n >= 2");
  CounterRng rng(seed, StreamPurpose::RealNoise);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix w = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = normal(rng);
  return HermitianMatrix::from_real(w);
}

/// C = z z^T + sigma W with unit diagonal.
inline HermitianMatrix real_data_matrix(const SignVector& z, const HermitianMatrix& w, double sigma) {
  detail::require_dims(z.size() == w.size(), "real_data_matrix: dimension mismatch");
  detail::require(sigma >= 0.0, "real_data_matrix: sigma must be nonnegative");
  RealMatrix c = z.values() * z.values().transpose() + sigma * w.matrix().real();
  c.diagonal().setOnes();
  return HermitianMatrix::from_real(c);
}

inline HermitianMatrix real_certificate(const SignVector& z, const HermitianMatrix& w, double sigma) {
  detail::require_dims(z.size() == w.size(), "real_certificate: dimension mismatch");
  detail::require(sigma >= 0.0, "real_certificate: sigma must be nonnegative");
  detail::require(w.is_real(), "real_certificate: W must be real");
  const double n = z.size();
  const RealMatrix wr = w.matrix().real();
  const RealVector& zv = z.values();
  const RealVector wz = wr * zv;
  RealMatrix s = -(zv * zv.transpose()) - sigma * wr;
  s.diagonal().array() += n + sigma * (zv.array() * wz.array());
  // S z = 0 holds algebraically because z .* z = 1.
  const double sz = (s * zv).norm();
  if (!(sz <= 1e-10 * n * std::max(1.0, sigma * wr.cwiseAbs().maxCoeff())))
    throw Error("real_certificate: S z = 0 violated (" + std::to_string(sz) + ")");
  return HermitianMatrix::from_real(s);
}

struct RecoveryCheck {
  bool recovered = false;
  double min_eig = 0.0;
  double second_eig = 0.0;
  double residual = 0.0;  // ||S z||_2
};

/// Recovery is declared when lambda_min(S) >= -1e-14 n.
inline RecoveryCheck exact_recovery_check(const SignVector& z, const HermitianMatrix& w, double sigma,
                                          double psd_tol = -1e-14) {
  const HermitianMatrix s = real_certificate(z, w, sigma);
  const auto [l1, l2] = two_smallest_eigenvalues(s, 1e-12);
  RecoveryCheck r;
  r.min_eig = l1;
  r.second_eig = l2;
  r.residual = s.apply(z.as_complex()).norm();
  r.recovered = l1 >= psd_tol * z.size();
  return r;
}

/// sqrt(n / (2 log n)), the recovery threshold curve.
inline double real_threshold(double n) { return std::sqrt(n / (2.0 * std::log(n))); }

}  // namespace angsync
