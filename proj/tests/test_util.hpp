#pragma once

// Random generators and independent oracles shared by the test suites. Nothing
// here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "angsync/angsync.hpp"

namespace angsync::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed, StreamPurpose::Test) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  ComplexVector complex_vector(int n) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(normal(), normal());
    return v;
  }

  ComplexMatrix complex_matrix(int n) {
    ComplexMatrix m(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) m(i, j) = Complex(normal(), normal());
    return m;
  }

  HermitianMatrix hermitian(int n) { return symmetrize(complex_matrix(n)); }

  PhaseVector phases(int n) {
    RealVector t(n);
    for (int i = 0; i < n; ++i) t(i) = uniform(0.0, 2.0 * std::numbers::pi);
    return PhaseVector::from_angles(t);
  }

  TangentVector tangent(const PhaseVector& x) { return project_tangent(x, complex_vector(x.size())); }

 private:
  CounterRng rng_;
  std::normal_distribution<double> normal_;
};

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations on the real
/// 2n x 2n embedding [[A, -B], [B, A]] (each eigenvalue appears twice there).
inline std::vector<double> jacobi_eigenvalues(const ComplexMatrix& h) {
  const int n = static_cast<int>(h.rows());
  const int m = 2 * n;
  std::vector<double> a(m * m);
  auto at = [&](int i, int j) -> double& { return a[i * m + j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      at(i, j) = h(i, j).real();
      at(i + n, j + n) = h(i, j).real();
      at(i, j + n) = -h(i, j).imag();
      at(i + n, j) = h(i, j).imag();
    }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < m; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(m);
  for (int i = 0; i < m; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (ev[2 * i] + ev[2 * i + 1]);
  return out;
}

/// Sum_ij conj(v_i) H_ij v_j, entry by entry.
inline Complex double_sum_form(const ComplexMatrix& h, const ComplexVector& v) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    for (Eigen::Index j = 0; j < v.size(); ++j) s += std::conj(v(i)) * h(i, j) * v(j);
  return s;
}

/// g(x) = -x* C x evaluated by double summation.
inline double g_cost(const HermitianMatrix& c, const ComplexVector& x) {
  return -double_sum_form(c.matrix(), x).real();
}

/// x_i + t v_i normalized, written out independently of retract().
inline ComplexVector normalize_step(const ComplexVector& x, const ComplexVector& v, double t) {
  ComplexVector y = x + t * v;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) /= std::abs(y(i));
  return y;
}

/// Central difference of g along the retraction curve.
inline double fd_directional(const HermitianMatrix& c, const PhaseVector& x, const ComplexVector& v,
                             double h) {
  return (g_cost(c, normalize_step(x.values(), v, h)) - g_cost(c, normalize_step(x.values(), v, -h))) /
         (2.0 * h);
}

/// Central second difference of g along the retraction curve.
inline double fd_second(const HermitianMatrix& c, const PhaseVector& x, const ComplexVector& v, double h) {
  return (g_cost(c, normalize_step(x.values(), v, h)) - 2.0 * g_cost(c, x.values()) +
          g_cost(c, normalize_step(x.values(), v, -h))) /
         (h * h);
}

/// Tangent-projected central difference of the gradient along the retraction.
/// The gradient is 2 (diag(Re(conj(y) .* C y)) - C) y, written out directly.
inline ComplexVector fd_hessian_vec(const HermitianMatrix& c, const PhaseVector& x, const ComplexVector& v,
                                    double h) {
  auto grad_at = [&](const ComplexVector& y) {
    const ComplexVector cy = c.matrix() * y;
    ComplexVector g(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
      g(i) = 2.0 * ((cy(i) * std::conj(y(i))).real() * y(i) - cy(i));
    return g;
  };
  ComplexVector d = (grad_at(normalize_step(x.values(), v, h)) - grad_at(normalize_step(x.values(), v, -h))) /
                    (2.0 * h);
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) -= (d(i) * std::conj(x[i])).real() * x[i];
  return d;
}

}  // namespace angsync::testing
