#pragma once

// Brute-force global optimization for tiny instances, used to cross-check the
// solver and the certificate. Deliberately shares no code with solver.hpp: the
// refinement is plain projected gradient ascent with Armijo backtracking.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "angsync/hermitian.hpp"
#include "angsync/phase_vector.hpp"
#include "angsync/z2.hpp"

namespace angsync {

struct QpOracleResult {
  PhaseVector x;
  double value = 0.0;       // after refinement (equals grid_value without it)
  double grid_value = 0.0;  // best value on the grid
};

namespace detail {

inline double oracle_value(const ComplexMatrix& c, const ComplexVector& x) {
  return x.dot(c * x).real();
}

// Gradient ascent of x* C x over unit-modulus vectors from x.
inline ComplexVector oracle_refine(const ComplexMatrix& c, ComplexVector x, double grad_tol) {
  auto normalize = [](ComplexVector v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) /= std::abs(v(i));
    return v;
  };
  double f = oracle_value(c, x);
  double step = 1.0 / std::max(1.0, c.norm());
  for (int it = 0; it < 200000; ++it) {
    ComplexVector g = 2.0 * (c * x);
    for (Eigen::Index i = 0; i < x.size(); ++i) g(i) -= (g(i) * std::conj(x(i))).real() * x(i);
    const double gg = g.squaredNorm();
    if (std::sqrt(gg) <= grad_tol) break;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      const ComplexVector y = normalize(x + step * g);
      const double fy = oracle_value(c, y);
      if (fy >= f + 1e-4 * step * gg) {
        x = y;
        f = fy;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace detail

/// Maximizes x* C x over the grid x_1 = 1, x_k = e^{2 pi i m_k / K}, then
/// optionally polishes the best grid point by local ascent. Budget K^{n-1}.
/// The returned x has x_1 = 1.
inline QpOracleResult brute_force_qp(const HermitianMatrix& c, int k, bool refine = true,
                                     double grad_tol = 1e-12) {
  const int n = c.size();
  detail::require(n >= 1 && n <= 6, "brute_force_qp: n must be at most 6");
  detail::require(k >= 8, "brute_force_qp: need K >= 8");
  const ComplexMatrix& m = c.matrix();

  std::vector<Complex> roots(k);
  for (int j = 0; j < k; ++j) roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / k);

  std::vector<int> idx(n, 0);
  ComplexVector x = ComplexVector::Ones(n);
  ComplexVector best = x;
  double best_value = detail::oracle_value(m, x);
  while (true) {
    int pos = n - 1;
    while (pos >= 1 && idx[pos] == k - 1) {
      idx[pos] = 0;
      x(pos) = roots[0];
      --pos;
    }
    if (pos < 1) break;
    ++idx[pos];
    x(pos) = roots[idx[pos]];
    const double v = detail::oracle_value(m, x);
    if (v > best_value) {
      best_value = v;
      best = x;
    }
  }

  QpOracleResult out{PhaseVector(best), best_value, best_value};
  if (refine) {
    ComplexVector polished = detail::oracle_refine(m, best, grad_tol * n);
    polished *= std::conj(polished(0)) / std::abs(polished(0));  // back to x_1 = 1
    const double v = detail::oracle_value(m, polished);
    if (v >= best_value) out = {PhaseVector::normalized(polished), v, best_value};
  }
  return out;
}

struct RealOracleResult {
  SignVector x;
  double value = 0.0;
};

/// Exhaustive maximization of x^T C x over sign vectors with x_1 = +1.
inline RealOracleResult brute_force_real(const HermitianMatrix& c) {
  const int n = c.size();
  detail::require(n >= 1 && n <= 20, "brute_force_real: n must be at most 20");
  const RealMatrix m = c.matrix().real();
  RealVector x(n);
  RealOracleResult out{SignVector::ones(n), -std::numeric_limits<double>::infinity()};
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    x(0) = 1.0;
    for (int i = 1; i < n; ++i) x(i) = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
    const double v = x.dot(m * x);
    if (v > out.value) out = {SignVector(x), v};
  }
  return out;
}

}  // namespace angsync
