#pragma once

// Synthetic angular synchronization instances: planted phases z, complex Wigner
// noise W and the measurement matrix C = zz* + sigma W with unit diagonal.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "angsync/hermitian.hpp"
#include "angsync/phase_vector.hpp"
#include "angsync/rng.hpp"

namespace angsync {

/// Uniformly random phases e^{i theta_k}, theta_k ~ U[0, 2pi).
inline PhaseVector random_signal(int n, std::uint64_t seed) {
  detail::require(n >= 2, "random_signal: need n >= 2");
  CounterRng rng(seed, StreamPurpose::Signal);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  RealVector theta(n);
  for (int i = 0; i < n; ++i) theta(i) = angle(rng);
  return PhaseVector::from_angles(theta);
}

/// Complex Wigner matrix: zero diagonal, W_ij for i < j i.i.d. standard
/// complex normal (real and imaginary parts N(0, 1/2), so E|W_ij|^2 = 1),
/// W_ji = conj(W_ij).
inline HermitianMatrix sample_wigner(int n, std::uint64_t seed) {
  detail::require(n >= 2, "sample_wigner: need n >= 2");
  CounterRng rng(seed, StreamPurpose::Noise);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      w(i, j) = Complex(re, im);
      w(j, i) = Complex(re, -im);
    }
  }
  return HermitianMatrix(w);
}

/// One synthetic problem. Built only through assemble_instance (or the bundle
/// reader), which establish: W Hermitian with zero diagonal, C_ij = z_i conj(z_j)
/// + sigma W_ij off the diagonal and C_ii = 1.
class SyncInstance {
 public:
  int n() const { return z_.size(); }
  const PhaseVector& z() const { return z_; }
  double sigma() const { return sigma_; }
  const HermitianMatrix& W() const { return w_; }
  const HermitianMatrix& C() const { return c_; }
  std::uint64_t seed() const { return seed_; }

 private:
  friend SyncInstance assemble_instance(const PhaseVector&, const HermitianMatrix&, double,
                                        std::uint64_t);
  PhaseVector z_;
  double sigma_ = 0.0;
  HermitianMatrix w_;
  HermitianMatrix c_;
  std::uint64_t seed_ = 0;
};

inline SyncInstance assemble_instance(const PhaseVector& z, const HermitianMatrix& w, double sigma,
                                      std::uint64_t seed) {
  detail::require_dims(z.size() == w.size(), "assemble_instance: dimension mismatch");
  detail::require(sigma >= 0.0, "assemble_instance: sigma must be nonnegative");
  for (int i = 0; i < w.size(); ++i)
    detail::require(w(i, i) == Complex(0.0, 0.0), "assemble_instance: W must have zero diagonal");
  ComplexMatrix c = z.values() * z.values().adjoint() + sigma * w.matrix();
  c.diagonal().setOnes();
  SyncInstance inst;
  inst.z_ = z;
  inst.sigma_ = sigma;
  inst.w_ = w;
  inst.c_ = HermitianMatrix(c);
  inst.seed_ = seed;
  return inst;
}

/// Constants in the discordance test ||W|| <= a sqrt(n), ||Wz||_inf <= b sqrt(n log n).
struct DiscordanceConstants {
  double opnorm = 3.0;
  double inf = 3.0;
};

struct DiscordanceReport {
  double opnorm_W = 0.0;
  double opnorm_bound = 0.0;
  double inf_Wz = 0.0;
  double inf_bound = 0.0;
  bool discordant = false;
};

inline double inf_norm(const ComplexVector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

/// z-discordance of W. log is the natural logarithm.
inline DiscordanceReport is_discordant(const HermitianMatrix& w, const PhaseVector& z, double tol,
                                       const DiscordanceConstants& k = {}) {
  detail::require_dims(w.size() == z.size(), "is_discordant: dimension mismatch");
  const double n = w.size();
  DiscordanceReport r;
  r.opnorm_W = operator_norm(w, tol);
  r.opnorm_bound = k.opnorm * std::sqrt(n);
  r.inf_Wz = inf_norm(w.apply(z.values()));
  r.inf_bound = k.inf * std::sqrt(n * std::log(n));
  r.discordant = r.opnorm_W <= r.opnorm_bound && r.inf_Wz <= r.inf_bound;
  return r;
}

/// Empirical exceedance frequencies of the two discordance statistics next to
/// their analytic tail bounds (e^{-n/2} and 2 n^{-5/4}).
struct NoiseTailStats {
  int n = 0;
  int trials = 0;
  double freq_opnorm = 0.0;
  double freq_inf = 0.0;
  double bound_opnorm = 0.0;
  double bound_inf = 0.0;
  double max_opnorm_ratio = 0.0;  // max ||W|| / sqrt(n)
  double max_inf_ratio = 0.0;     // max ||Wz||_inf / sqrt(n log n)
};

/// Trial t draws z and W from derive_seed(seed_base, {n, t}).
inline NoiseTailStats noise_tail_stats(int n, int trials, std::uint64_t seed_base) {
  detail::require(trials >= 1, "noise_tail_stats: need trials >= 1");
  detail::require(n >= 2, "noise_tail_stats: need n >= 2");
  NoiseTailStats s;
  s.n = n;
  s.trials = trials;
  s.bound_opnorm = std::exp(-n / 2.0);
  s.bound_inf = 2.0 * std::pow(static_cast<double>(n), -1.25);
  int over_op = 0;
  int over_inf = 0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = derive_seed(seed_base, {static_cast<std::uint64_t>(n),
                                                       static_cast<std::uint64_t>(t)});
    const DiscordanceReport d = is_discordant(sample_wigner(n, seed), random_signal(n, seed), 1e-10);
    over_op += d.opnorm_W > d.opnorm_bound;
    over_inf += d.inf_Wz > d.inf_bound;
    s.max_opnorm_ratio = std::max(s.max_opnorm_ratio, d.opnorm_W / std::sqrt(double(n)));
    s.max_inf_ratio = std::max(s.max_inf_ratio, d.inf_Wz / std::sqrt(n * std::log(double(n))));
  }
  s.freq_opnorm = static_cast<double>(over_op) / trials;
  s.freq_inf = static_cast<double>(over_inf) / trials;
  return s;
}

}  // namespace angsync
