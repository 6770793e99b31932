#pragma once

// Riemannian geometry of the product of n unit circles, embedded in C^n with
// the real inner product <u, v> = Re(u* v), and the derivatives of
// g(x) = -x* C x on it.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "angsync/hermitian.hpp"
#include "angsync/phase_vector.hpp"

namespace angsync {

inline double inner(const ComplexVector& u, const ComplexVector& v) { return u.dot(v).real(); }

/// A direction in the tangent space at `base`: Re(dir_i conj(base_i)) = 0.
class TangentVector {
 public:
  static constexpr double kTangencyTol = 1e-10;

  TangentVector(PhaseVector base, ComplexVector dir) : base_(std::move(base)), dir_(std::move(dir)) {
    detail::require_dims(dir_.size() == base_.size(), "TangentVector: dimension mismatch");
    const double scale = std::max(1.0, dir_.size() ? dir_.cwiseAbs().maxCoeff() : 0.0);
    for (Eigen::Index i = 0; i < dir_.size(); ++i) {
      if (!(std::abs((dir_(i) * std::conj(base_[i])).real()) <= kTangencyTol * scale))
        throw Error("TangentVector: entry " + std::to_string(i) + " is not tangent");
    }
  }

  static TangentVector zero(const PhaseVector& base) {
    return TangentVector(base, ComplexVector::Zero(base.size()));
  }

  const PhaseVector& base() const { return base_; }
  const ComplexVector& dir() const { return dir_; }
  int size() const { return base_.size(); }
  double norm() const { return dir_.norm(); }

 private:
  PhaseVector base_;
  ComplexVector dir_;
};

namespace detail {

inline ComplexVector project_raw(const ComplexVector& x, const ComplexVector& v) {
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = v(i) - (v(i) * std::conj(x(i))).real() * x(i);
  return out;
}

// d_i = Re((Cx)_i conj(x_i)), the diagonal of Re{ddiag(C x x*)}.
inline RealVector certificate_shift(const ComplexVector& cx, const ComplexVector& x) {
  RealVector d(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) d(i) = (cx(i) * std::conj(x(i))).real();
  return d;
}

}  // namespace detail

/// v - Re(v_i conj(x_i)) x_i entrywise.
inline TangentVector project_tangent(const PhaseVector& x, const ComplexVector& v) {
  detail::require_dims(v.size() == x.size(), "project_tangent: dimension mismatch");
  return TangentVector(x, detail::project_raw(x.values(), v));
}

/// Projection retraction: (x_i + t v_i) / |x_i + t v_i|.
inline PhaseVector retract(const PhaseVector& x, const TangentVector& v, double step) {
  detail::require_dims(v.size() == x.size(), "retract: dimension mismatch");
  ComplexVector y = x.values() + step * v.dir();
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = std::abs(y(i));
    if (r < 1e-14) throw Error("retract: degenerate entry " + std::to_string(i));
    y(i) /= r;
  }
  return PhaseVector(std::move(y));
}

/// x* C x, the objective being maximized.
inline double cost(const HermitianMatrix& c, const PhaseVector& x) { return quad_form(c, x.values()); }

/// Riemannian gradient of g(x) = -x* C x: 2 (Re{ddiag(C x x*)} - C) x = 2 S x.
inline TangentVector riemannian_grad(const HermitianMatrix& c, const PhaseVector& x) {
  detail::require_dims(c.size() == x.size(), "riemannian_grad: dimension mismatch");
  const ComplexVector cx = c.apply(x.values());
  const RealVector d = detail::certificate_shift(cx, x.values());
  ComplexVector g = 2.0 * (d.cast<Complex>().cwiseProduct(x.values()) - cx);
  // Same vector written as the projection of the Euclidean gradient -2Cx.
  assert((g - detail::project_raw(x.values(), -2.0 * cx)).norm() <=
         1e-12 * std::max(1.0, c.matrix().norm()) * std::sqrt(double(x.size())) + 1e-12);
  return TangentVector(x, detail::project_raw(x.values(), g));
}

/// Hess g(x)[v] = Proj_x(2 S v) with S = Re{ddiag(C x x*)} - C.
inline TangentVector hessian_vec(const HermitianMatrix& c, const PhaseVector& x,
                                 const TangentVector& v) {
  detail::require_dims(c.size() == x.size() && v.size() == x.size(),
                       "hessian_vec: dimension mismatch");
  const RealVector d = detail::certificate_shift(c.apply(x.values()), x.values());
  const ComplexVector sv = d.cast<Complex>().cwiseProduct(v.dir()) - c.apply(v.dir());
  return TangentVector(x, detail::project_raw(x.values(), 2.0 * sv));
}

/// Rotates x so that z* x is real and nonnegative; this phase minimizes
/// ||x e^{i theta} - z||_2. Throws when z* x = 0.
inline PhaseVector align_global_phase(const PhaseVector& x, const PhaseVector& z) {
  detail::require_dims(x.size() == z.size(), "align_global_phase: dimension mismatch");
  const Complex zx = z.values().dot(x.values());
  if (std::abs(zx) <= 1e-300) throw Error("align_global_phase: z* x = 0, alignment undefined");
  return x.rotated(-std::arg(zx));
}

}  // namespace angsync
