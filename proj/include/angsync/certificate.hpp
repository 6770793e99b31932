#pragma once

// Dual certificate for the semidefinite relaxation
//
//   max trace(C X)  s.t.  diag(X) = 1, X psd
//
// at a rank-one candidate X = x x*. The only possible certificate is
// S = Re{ddiag(C x x*)} - C: X is optimal iff S is psd, and optimal and unique
// when additionally rank(S) = n - 1. S x = 0 is the first-order condition, so
// everything is checked through S and x without forming X.

#include <cmath>
#include <limits>
#include <string>

#include "angsync/hermitian.hpp"
#include "angsync/manifold.hpp"

namespace angsync {

inline HermitianMatrix build_certificate(const HermitianMatrix& c, const PhaseVector& x) {
  detail::require_dims(c.size() == x.size(), "build_certificate: dimension mismatch");
  const RealVector d = detail::certificate_shift(c.apply(x.values()), x.values());
  ComplexMatrix s = -c.matrix();
  s.diagonal() += d.cast<Complex>();
  return HermitianMatrix(s);
}

/// Thresholds, each scaled by n when applied.
struct CertifyTolerances {
  double residual_tol = 1e-9;
  double psd_tol = -1e-14;
  double rank_tol = 1e-8;
};

struct CertificateReport {
  double residual = std::numeric_limits<double>::quiet_NaN();    // ||S x||_2
  double min_eig = std::numeric_limits<double>::quiet_NaN();     // lambda_1(S)
  double second_eig = std::numeric_limits<double>::quiet_NaN();  // lambda_2(S)
  double diag_min = std::numeric_limits<double>::quiet_NaN();    // min_i S_ii
  bool tight = false;
  bool unique = false;
  std::string note;  // empty unless the eigensolver failed
};

inline CertificateReport certify(const HermitianMatrix& c, const PhaseVector& x,
                                 const CertifyTolerances& tol = {}) {
  detail::require(tol.residual_tol > 0.0, "certify: residual_tol must be positive");
  detail::require(tol.psd_tol < 0.0, "certify: psd_tol must be negative");
  detail::require(tol.rank_tol > 0.0, "certify: rank_tol must be positive");
  detail::require(c.size() >= 2, "certify: need n >= 2");
  const double n = c.size();
  const HermitianMatrix s = build_certificate(c, x);

  CertificateReport r;
  r.residual = s.apply(x.values()).norm();
  r.diag_min = s.matrix().diagonal().real().minCoeff();
  try {
    const auto [l1, l2] = two_smallest_eigenvalues(s, 1e-12);
    r.min_eig = l1;
    r.second_eig = l2;
  } catch (const ConvergenceError& e) {
    r.note = e.what();
    return r;
  }
  r.tight = r.residual <= tol.residual_tol * n && r.min_eig >= tol.psd_tol * n;
  r.unique = r.tight && r.second_eig >= tol.rank_tol * n;
  return r;
}

}  // namespace angsync
