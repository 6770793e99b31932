#pragma once

// Second-order critical points of
//
//   max x* C x   s.t.  |x_1| = ... = |x_n| = 1
//
// by a Riemannian trust-region method (Steihaug-Toint truncated CG inner
// solver) on g(x) = -x* C x, followed by negative-curvature escapes driven by
// the certificate matrix S. When the planted signal z is supplied and the run
// ends below z* C z, the method restarts from z; since every accepted step is
// an ascent step, the result then has cost >= z* C z.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "angsync/certificate.hpp"
#include "angsync/hermitian.hpp"
#include "angsync/manifold.hpp"
#include "angsync/rng.hpp"

namespace angsync {

struct SolverOptions {
  double grad_tol = 1e-10;  // stop when ||grad||_2 <= grad_tol * n
  int max_iters = 500;      // outer trust-region iterations, summed over restarts
  double escape_tol = 1e-10;
  int max_escapes = 5;
  bool fd_check = false;  // compare the gradient with finite differences at x0

  void validate() const {
    detail::require(grad_tol > 0.0 && escape_tol > 0.0, "SolverOptions: tolerances must be positive");
    detail::require(max_iters >= 1, "SolverOptions: max_iters must be >= 1");
    detail::require(max_escapes >= 0, "SolverOptions: max_escapes must be >= 0");
  }
};

struct SolverReport {
  PhaseVector x;
  double cost = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int escapes = 0;
  bool beat_planted = false;
  bool converged = false;
  bool restarted_from_planted = false;
  /// x_k* C x_k after every accepted step of the run that produced x.
  std::vector<double> cost_history;
};

/// Leading eigenvector of C rounded entrywise to the unit circle.
inline PhaseVector spectral_init(const HermitianMatrix& c) {
  detail::require(c.size() >= 2, "spectral_init: need n >= 2");
  const EigenResult top = extreme_eigs(c, 0, 1, 1e-10);
  return PhaseVector::normalized(top.vectors.col(0), 1e-12);
}

/// Riemannian Hessian of g at x in the coordinates v = i x .* t (t real):
/// <v, Hess v> = t^T H t with H = 2 Re(diag(x)* S diag(x)).
inline RealMatrix tangent_hessian_matrix(const HermitianMatrix& c, const PhaseVector& x) {
  const HermitianMatrix s = build_certificate(c, x);
  const ComplexVector& xv = x.values();
  return 2.0 * (xv.conjugate().asDiagonal() * s.matrix() * xv.asDiagonal()).real();
}

/// A unit tangent direction of negative curvature at x, if S has an
/// eigenvalue below -tol * n and some tangent direction realizes curvature
/// below -tol * n. Candidates: the tangent projection of S's lowest
/// eigenvector, and the lowest eigenvector of the tangent Hessian matrix.
inline std::optional<TangentVector> escape_direction(const HermitianMatrix& c, const PhaseVector& x,
                                                     double tol) {
  detail::require_dims(c.size() == x.size(), "escape_direction: dimension mismatch");
  detail::require(tol > 0.0, "escape_direction: tol must be positive");
  const double n = c.size();
  const HermitianMatrix s = build_certificate(c, x);
  const EigenResult low = extreme_eigs(s, 1, 0, 1e-12);
  if (low.values(0) >= -tol * n) return std::nullopt;

  std::optional<TangentVector> best;
  double best_curv = -tol * n;
  auto consider = [&](const ComplexVector& raw) {
    TangentVector v = project_tangent(x, raw);
    const double nv = v.norm();
    if (nv <= 1e-8) return;
    v = TangentVector(x, v.dir() / nv);
    const double curv = inner(v.dir(), hessian_vec(c, x, v).dir());
    if (curv < best_curv) {
      best_curv = curv;
      best = std::move(v);
    }
  };
  consider(low.vectors.col(0));

  Eigen::SelfAdjointEigenSolver<RealMatrix> hes(tangent_hessian_matrix(c, x));
  if (hes.info() != Eigen::Success) throw ConvergenceError("escape_direction: Hessian solve failed");
  const ComplexVector ix = Complex(0.0, 1.0) * x.values();
  consider(ix.cwiseProduct(hes.eigenvectors().col(0).cast<Complex>()));
  return best;
}

namespace detail {

struct TrState {
  PhaseVector x;
  ComplexVector cx;
  double f = 0.0;  // g(x) = -x* C x
  ComplexVector grad;
};

inline TrState make_state(const HermitianMatrix& c, PhaseVector x) {
  TrState s{std::move(x), {}, 0.0, {}};
  s.cx = c.apply(s.x.values());
  s.f = -s.x.values().dot(s.cx).real();
  const RealVector d = certificate_shift(s.cx, s.x.values());
  s.grad = project_raw(s.x.values(), 2.0 * (d.cast<Complex>().cwiseProduct(s.x.values()) - s.cx));
  return s;
}

/// g(x) - g(y) along the retraction curve y = retract(x, eta), evaluated as
/// Re((y - x)* C (y + x)) with y - x taken from the retraction formula for
/// |x_i| = 1. Near a critical point the true change falls below the effect of
/// rounding in the stored moduli, so differencing stored vectors (or costs)
/// gives noise of the wrong sign.
inline double cost_decrease(const TrState& from, const ComplexVector& eta, const TrState& to) {
  const ComplexVector& x = from.x.values();
  ComplexVector delta(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    // r = |x_i + eta_i|, 1 - r = -u / (1 + r) with u = r^2 - 1.
    const double u = 2.0 * (std::conj(x(i)) * eta(i)).real() + std::norm(eta(i));
    const double r = std::sqrt(1.0 + u);
    delta(i) = (eta(i) - (u / (1.0 + r)) * x(i)) / r;
  }
  return delta.dot(to.cx + from.cx).real();
}

inline ComplexVector hess_apply(const HermitianMatrix& c, const TrState& s, const ComplexVector& v) {
  const RealVector d = certificate_shift(s.cx, s.x.values());
  return project_raw(s.x.values(), 2.0 * (d.cast<Complex>().cwiseProduct(v) - c.apply(v)));
}

// Positive tau with ||eta + tau delta|| = radius.
inline double boundary_step(const ComplexVector& eta, const ComplexVector& delta, double radius) {
  const double a = delta.squaredNorm();
  const double b = 2.0 * inner(eta, delta);
  const double cc = eta.squaredNorm() - radius * radius;
  const double disc = std::max(0.0, b * b - 4.0 * a * cc);
  return (-b + std::sqrt(disc)) / (2.0 * a);
}

struct TcgResult {
  ComplexVector eta;
  ComplexVector h_eta;
  bool hit_boundary = false;
};

// Removes the component along i x. The cost is invariant under a global phase,
// so the Hessian vanishes on that direction; rounding left there would get
// zero curvature and send CG to the trust-region boundary.
inline ComplexVector remove_gauge(const ComplexVector& x, ComplexVector v) {
  const ComplexVector ix = Complex(0.0, 1.0) * x;
  v -= (inner(ix, v) / ix.squaredNorm()) * ix;
  return v;
}

// Steihaug-Toint truncated CG on the trust-region model, restricted to the
// tangent directions orthogonal to the global-phase orbit.
inline TcgResult truncated_cg(const HermitianMatrix& c, const TrState& s, double radius) {
  const Eigen::Index n = s.x.size();
  TcgResult out{ComplexVector::Zero(n), ComplexVector::Zero(n), false};
  ComplexVector r = remove_gauge(s.x.values(), s.grad);
  const double r0 = r.norm();
  double rr = r.squaredNorm();
  ComplexVector delta = -r;
  const int max_inner = static_cast<int>(std::max<Eigen::Index>(2 * n, 20));
  for (int j = 0; j < max_inner; ++j) {
    const ComplexVector h_delta = hess_apply(c, s, delta);
    const double kappa = inner(delta, h_delta);
    const double alpha = rr / kappa;
    const ComplexVector next = out.eta + alpha * delta;
    if (kappa <= 0.0 || next.norm() >= radius) {
      const double tau = boundary_step(out.eta, delta, radius);
      out.eta += tau * delta;
      out.h_eta += tau * h_delta;
      out.hit_boundary = true;
      return out;
    }
    out.eta = next;
    out.h_eta += alpha * h_delta;
    r = remove_gauge(s.x.values(), project_raw(s.x.values(), r + alpha * h_delta));
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= r0 * std::min(r0, 0.1)) break;
    delta = remove_gauge(s.x.values(), project_raw(s.x.values(), -r + (rr_next / rr) * delta));
    rr = rr_next;
  }
  return out;
}

struct RunResult {
  TrState state;
  int iterations = 0;
  int escapes = 0;
  bool converged = false;
  std::vector<double> history;
};

inline RunResult trust_region_run(const HermitianMatrix& c, PhaseVector x0, const SolverOptions& opts,
                                  int iter_budget) {
  const double n = c.size();
  const double max_radius = std::numbers::pi * std::sqrt(n);
  double radius = max_radius / 8.0;
  RunResult run{make_state(c, std::move(x0)), 0, 0, false, {}};
  run.history.push_back(-run.state.f);

  while (true) {
    if (run.state.grad.norm() <= opts.grad_tol * n) {
      if (run.escapes >= opts.max_escapes) {
        run.converged = true;
        return run;
      }
      const auto v = escape_direction(c, run.state.x, opts.escape_tol);
      if (!v) {
        run.converged = true;
        return run;
      }
      // Second-order ascent along the negative-curvature direction.
      bool moved = false;
      for (double t = 1.0; t > 1e-8; t *= 0.5) {
        TrState trial = make_state(c, retract(run.state.x, *v, t));
        if (cost_decrease(run.state, t * v->dir(), trial) > 0.0) {
          run.state = std::move(trial);
          moved = true;
          break;
        }
      }
      if (!moved) {
        run.converged = true;
        return run;
      }
      ++run.escapes;
      radius = max_radius / 8.0;
      run.history.push_back(-run.state.f);
      continue;
    }
    if (run.iterations >= iter_budget) return run;
    ++run.iterations;

    const TcgResult step = truncated_cg(c, run.state, radius);
    const TangentVector eta(run.state.x, step.eta);
    TrState trial = make_state(c, retract(run.state.x, eta, 1.0));
    const double model_decrease = -(inner(run.state.grad, step.eta) + 0.5 * inner(step.eta, step.h_eta));
    const double actual_decrease = cost_decrease(run.state, step.eta, trial);
    const double reg = std::max(1.0, std::abs(run.state.f)) * std::numeric_limits<double>::epsilon() * 1e3;
    const double rho = (actual_decrease + reg) / (model_decrease + reg);

    if (rho < 0.25)
      radius *= 0.25;
    else if (rho > 0.75 && step.hit_boundary)
      radius = std::min(2.0 * radius, max_radius);

    if (rho > 0.1 && actual_decrease >= 0.0) {
      run.state = std::move(trial);
      run.history.push_back(-run.state.f);
    }
    if (radius < 1e-15 * max_radius) return run;
  }
}

inline void gradient_fd_check(const HermitianMatrix& c, const PhaseVector& x) {
  CounterRng rng(0xfdc4ec, StreamPurpose::Test);
  std::normal_distribution<double> normal;
  ComplexVector raw(x.size());
  for (int i = 0; i < x.size(); ++i) raw(i) = Complex(normal(rng), normal(rng));
  const TangentVector v = project_tangent(x, raw);
  const double h = 1e-6;
  const double fd = (-cost(c, retract(x, v, h)) + cost(c, retract(x, v, -h))) / (2.0 * h);
  const double analytic = inner(riemannian_grad(c, x).dir(), v.dir());
  const double scale = std::max({1.0, std::abs(fd), std::abs(analytic)});
  if (std::abs(fd - analytic) > 1e-5 * scale * std::max(1.0, c.matrix().norm()))
    throw Error("solve_second_order: gradient finite-difference check failed");
}

}  // namespace detail

inline SolverReport solve_second_order(const HermitianMatrix& c, const PhaseVector& x0,
                                       const std::optional<PhaseVector>& z_opt,
                                       const SolverOptions& opts = {}) {
  opts.validate();
  detail::require_dims(c.size() == x0.size(), "solve_second_order: dimension mismatch");
  if (z_opt) detail::require_dims(z_opt->size() == c.size(), "solve_second_order: dimension mismatch");
  if (opts.fd_check) detail::gradient_fd_check(c, x0);

  detail::RunResult run = detail::trust_region_run(c, x0, opts, opts.max_iters);
  int iterations = run.iterations;
  int escapes = run.escapes;
  bool restarted = false;

  // x* C x - z* C z without cancellation.
  ComplexVector cz;
  auto gain_over_planted = [&](const detail::TrState& s) {
    return (s.x.values() - z_opt->values()).dot(s.cx + cz).real();
  };
  if (z_opt) {
    cz = c.apply(z_opt->values());
    if (gain_over_planted(run.state) < 0.0) {
      detail::RunResult again =
          detail::trust_region_run(c, *z_opt, opts, std::max(1, opts.max_iters - iterations));
      iterations += again.iterations;
      escapes += again.escapes;
      restarted = true;
      run = std::move(again);
    }
  }

  SolverReport rep;
  rep.x = run.state.x;
  rep.cost = -run.state.f;
  rep.grad_norm = run.state.grad.norm();
  rep.iterations = iterations;
  rep.escapes = escapes;
  rep.converged = run.converged;
  rep.beat_planted = z_opt.has_value() && gain_over_planted(run.state) >= 0.0;
  rep.restarted_from_planted = restarted;
  rep.cost_history = std::move(run.history);
  return rep;
}

}  // namespace angsync
