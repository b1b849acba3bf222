// SPDX-License-Identifier: Apache-2.0

#include "polycg/eigenest.hpp"

#include <cmath>
#include <cstdint>

namespace polycg {

namespace {

// splitmix64: tiny, stateless-seedable, identical everywhere.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Vector random_uniform_vector(Index n, std::uint64_t seed) {
  Vector v(n);
  std::uint64_t state = seed;
  for (Index i = 0; i < n; ++i) {
    const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;  // [0, 1)
    v[i] = 2.0 * u - 1.0;
  }
  return v;
}

namespace {

// Start vector with the regenerate-once fallback for degenerate draws.
Vector start_vector(const LinearOperator& op, std::uint64_t seed, const char* who) {
  Vector v = random_uniform_vector(op.size(), seed);
  double norm = v.norm();
  if (norm == 0.0) {
    v = random_uniform_vector(op.size(), seed + 1);
    norm = v.norm();
    if (norm == 0.0) throw NumericalError(std::string(who) + ": zero starting vector");
  }
  return v / norm;
}

}  // namespace

EigResult power_method(const LinearOperator& op, const EigOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("power_method: tol must be positive");
  EigResult res;
  Vector v = start_vector(op, opts.seed, "power_method");
  Vector w(op.size());
  double beta_old = 0.0;
  for (int it = 1; it <= opts.maxit; ++it) {
    op.apply(v, w);
    ++res.matvecs;
    const double beta = v.dot(w);
    res.value = beta;
    res.iters = it;
    res.trace.push_back(beta);
    if (it > 1 && std::abs(beta - beta_old) <= opts.tol * std::abs(beta)) {
      res.converged = true;
      return res;
    }
    beta_old = beta;
    const double wnorm = w.norm();
    if (wnorm == 0.0) {
      // A v = 0 exactly: 0 is the dominant action on this start vector.
      v = start_vector(op, opts.seed + 1, "power_method");
      op.apply(v, w);
      ++res.matvecs;
      if (w.norm() == 0.0) {
        throw NumericalError("power_method: operator annihilates the start vector");
      }
    }
    v = w / w.norm();
  }
  return res;
}

EigResult dacg_smallest(const LinearOperator& op, const EigOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("dacg_smallest: tol must be positive");
  constexpr int kRestart = 50;

  EigResult res;
  Vector x = start_vector(op, opts.seed, "dacg_smallest");
  Vector ax(op.size()), p, ap(op.size()), g(op.size());
  op.apply(x, ax);
  ++res.matvecs;
  double q = x.dot(ax);  // ||x|| = 1
  if (!(q > 0.0)) {
    throw NumericalError("dacg_smallest: x'Ax <= 0, operator not positive definite");
  }
  double g_old_sq = 0.0;
  bool have_p = false;

  for (int it = 0; it <= opts.maxit; ++it) {
    res.value = q;
    res.iters = it;
    g = 2.0 * (ax - q * x);
    const double resid = (ax - q * x).norm() / q;  // ||x|| = 1
    if (resid <= opts.tol) {
      res.converged = true;
      res.trace.push_back(q);
      return res;
    }
    if (it == opts.maxit) break;  // best estimate with warning flag
    res.trace.push_back(q);

    const double gsq = g.squaredNorm();
    if (!have_p || it % kRestart == 0) {
      p = -g;
    } else {
      p = -g + (gsq / g_old_sq) * p;
    }
    have_p = true;
    g_old_sq = gsq;

    op.apply(p, ap);
    ++res.matvecs;

    // Minimize the Rayleigh quotient over span{x, p}: the smallest
    // eigenpair of the 2x2 pencil ([x p]'A[x p], [x p]'[x p]).
    const double hxx = q, hxp = x.dot(ap), hpp = p.dot(ap);
    const double mxx = 1.0, mxp = x.dot(p), mpp = p.squaredNorm();
    if (!(hpp > 0.0)) {
      throw NumericalError("dacg_smallest: p'Ap <= 0, operator not positive definite");
    }
    // Generalized problem (H - lambda M) c = 0: lambda from the quadratic
    // det(H - lambda M) = 0, take the smaller root.
    const double a2 = mxx * mpp - mxp * mxp;
    const double a1 = -(hxx * mpp + hpp * mxx - 2.0 * hxp * mxp);
    const double a0 = hxx * hpp - hxp * hxp;
    const double disc = std::sqrt(std::max(0.0, a1 * a1 - 4.0 * a2 * a0));
    const double lambda = (-a1 - disc) / (2.0 * a2);
    // Eigenvector of (H - lambda M): pick the larger-residual row.
    const double r11 = hxx - lambda * mxx, r12 = hxp - lambda * mxp;
    const double r22 = hpp - lambda * mpp;
    double cx, cp;
    if (std::abs(r12) + std::abs(r22) > std::abs(r11) + std::abs(r12)) {
      cx = -r22;
      cp = r12;
    } else {
      cx = -r12;
      cp = r11;
    }
    if (cx == 0.0 && cp == 0.0) {
      cx = 1.0;
      cp = 0.0;
    }
    x = cx * x + cp * p;
    ax = cx * ax + cp * ap;  // exact update, no extra matvec
    const double xnorm = x.norm();
    if (xnorm == 0.0) throw NumericalError("dacg_smallest: line search collapsed");
    x /= xnorm;
    ax /= xnorm;
    const double q_prev = q;
    q = x.dot(ax);
    if (!(q > 0.0)) {
      throw NumericalError("dacg_smallest: x'Ax <= 0, operator not positive definite");
    }
    if (q > q_prev * (1.0 + 1e-12)) {
      throw NumericalError("dacg_smallest: Rayleigh quotient increased");
    }
  }
  return res;
}

SpectralBounds estimate_bounds(const LinearOperator& op, const EigOptions& power_opts,
                               const EigOptions& dacg_opts) {
  const EigResult hi = power_method(op, power_opts);
  const EigResult lo = dacg_smallest(op, dacg_opts);
  SpectralBounds bounds;
  bounds.alpha0 = lo.value;
  bounds.beta0 = hi.value;
  bounds.alpha_iters = lo.iters;
  bounds.beta_iters = hi.iters;
  bounds.matvecs = lo.matvecs + hi.matvecs;
  bounds.alpha_converged = lo.converged;
  bounds.beta_converged = hi.converged;
  if (!(bounds.alpha0 > 0.0) || bounds.alpha0 > bounds.beta0) {
    throw NumericalError("estimate_bounds: estimates violate 0 < alpha0 <= beta0");
  }
  return bounds;
}

}  // namespace polycg
