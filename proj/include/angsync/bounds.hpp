#pragma once

// Estimation error between an estimate x and the planted z, and runtime checks
// of the quantitative error bounds that hold when W is z-discordant and
// x* C x >= z* C z:
//
//   ||x - z||_2            <= 12 sigma
//   ||x - z||_inf          <= 6 (sqrt(log n) + 29 sigma) sigma / sqrt(n)
//   ||W x||_inf            <= 36 sigma sqrt(n) + 3 sqrt(n log n)
//
// plus the sufficient condition for tightness
//
//   sqrt(n) > 3 sigma (72 sigma / sqrt(n) + 1 + 12 sigma + sqrt(log n))
//
// and the simpler threshold sigma <= n^{1/4} / 18 that implies it.
// All logarithms are natural.

#include <cmath>

#include "angsync/manifold.hpp"
#include "angsync/model.hpp"

namespace angsync {

/// min over theta of ||x e^{i theta} - z||_2 = sqrt(2 (n - |z* x|)).
///
/// Evaluated as the distance after alignment, which equals the closed form
/// exactly but has no cancellation when x is close to z.
inline double l2_error(const PhaseVector& x, const PhaseVector& z) {
  detail::require_dims(x.size() == z.size(), "l2_error: dimension mismatch");
  const Complex zx = z.values().dot(x.values());
  if (std::abs(zx) == 0.0) return std::sqrt(2.0 * x.size());
  const ComplexVector aligned = x.values() * std::polar(1.0, -std::arg(zx));
  return (aligned - z.values()).norm();
}

/// max_i |x_i - z_i| after aligning the global phase of x to z.
inline double linf_error(const PhaseVector& x, const PhaseVector& z) {
  const PhaseVector aligned = align_global_phase(x, z);
  return inf_norm(aligned.values() - z.values());
}

inline double lemma_l2_bound(double sigma) { return 12.0 * sigma; }

inline double lemma_linf_bound(double n, double sigma) {
  return 6.0 * (std::sqrt(std::log(n)) + 29.0 * sigma) * sigma / std::sqrt(n);
}

inline double wx_inf_bound(double n, double sigma) {
  return 36.0 * sigma * std::sqrt(n) + 3.0 * std::sqrt(n * std::log(n));
}

inline bool sufficient_condition(double n, double sigma) {
  return std::sqrt(n) >
         3.0 * sigma * (72.0 * sigma / std::sqrt(n) + 1.0 + 12.0 * sigma + std::sqrt(std::log(n)));
}

inline double theorem_threshold(double n) { return std::pow(n, 0.25) / 18.0; }

struct BoundReport {
  double l2_err = 0.0;
  double linf_err = 0.0;
  double correlation = 0.0;  // |z* x|
  double lemma2_bound = 0.0;
  double lemma3_bound = 0.0;
  double wx_inf = 0.0;
  double wx_inf_bound = 0.0;
  bool lemma2_ok = false;
  bool lemma3_ok = false;
  bool wx_ok = false;
  bool suff_cond_ok = false;
  bool thm_threshold_ok = false;
  /// The three error bounds are only guaranteed when W is z-discordant and x
  /// beats the planted cost; otherwise the *_ok flags are informational.
  bool binding = false;

  bool violated() const { return binding && !(lemma2_ok && lemma3_ok && wx_ok); }
};

/// Absolute slack for rounding in the measured errors.
inline constexpr double kBoundSlack = 1e-9;

inline BoundReport evaluate_bounds(const SyncInstance& inst, const PhaseVector& x, bool discordant,
                                   bool beat_planted) {
  detail::require_dims(x.size() == inst.n(), "evaluate_bounds: dimension mismatch");
  const double n = inst.n();
  const double sigma = inst.sigma();
  BoundReport r;
  r.correlation = std::abs(inst.z().values().dot(x.values()));
  r.l2_err = l2_error(x, inst.z());
  r.linf_err = r.correlation > 0.0 ? linf_error(x, inst.z()) : 2.0;
  r.lemma2_bound = lemma_l2_bound(sigma);
  r.lemma3_bound = lemma_linf_bound(n, sigma);
  r.wx_inf = inf_norm(inst.W().apply(x.values()));
  r.wx_inf_bound = wx_inf_bound(n, sigma);
  r.lemma2_ok = r.l2_err <= r.lemma2_bound + kBoundSlack;
  r.lemma3_ok = r.linf_err <= r.lemma3_bound + kBoundSlack;
  r.wx_ok = r.wx_inf <= r.wx_inf_bound;
  r.suff_cond_ok = sufficient_condition(n, sigma);
  r.thm_threshold_ok = sigma <= theorem_threshold(n);
  r.binding = discordant && beat_planted;
  return r;
}

/// Convenience overload that runs the discordance test itself.
inline BoundReport evaluate_bounds(const SyncInstance& inst, const PhaseVector& x, bool beat_planted) {
  const bool discordant = is_discordant(inst.W(), inst.z(), 1e-10).discordant;
  return evaluate_bounds(inst, x, discordant, beat_planted);
}

}  // namespace angsync
