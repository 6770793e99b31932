#pragma once

#include <cmath>
#include <string>

#include "angsync/hermitian.hpp"

namespace angsync {

/// Complex vector whose entries all have unit modulus: a point on the product
/// of n unit circles.
class PhaseVector {
 public:
  static constexpr double kModulusTol = 1e-12;

  PhaseVector() = default;

  explicit PhaseVector(ComplexVector v) : v_(std::move(v)) {
    detail::require_dims(v_.size() >= 1, "PhaseVector: empty vector");
    for (Eigen::Index i = 0; i < v_.size(); ++i) {
      if (!(std::abs(std::abs(v_(i)) - 1.0) <= kModulusTol))
        throw Error("PhaseVector: entry " + std::to_string(i) + " does not have unit modulus");
    }
  }

  static PhaseVector ones(int n) { return PhaseVector(ComplexVector::Ones(n)); }

  /// e^{i theta_k}
  static PhaseVector from_angles(const RealVector& theta) {
    ComplexVector v(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) v(i) = std::polar(1.0, theta(i));
    return PhaseVector(std::move(v));
  }

  /// Entrywise v_i / |v_i|; entries with |v_i| < floor become 1.
  static PhaseVector normalized(const ComplexVector& v, double floor = 1e-12) {
    ComplexVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double r = std::abs(v(i));
      out(i) = r < floor ? Complex(1.0, 0.0) : v(i) / r;
    }
    return PhaseVector(std::move(out));
  }

  int size() const { return static_cast<int>(v_.size()); }
  const ComplexVector& values() const { return v_; }
  Complex operator[](Eigen::Index i) const { return v_(i); }

  /// x e^{i theta}
  PhaseVector rotated(double theta) const {
    return PhaseVector(ComplexVector(v_ * std::polar(1.0, theta)));
  }

 private:
  ComplexVector v_;
};

}  // namespace angsync
