// SPDX-License-Identifier: Apache-2.0

#ifndef POLYCG_EIGENEST_HPP
#define POLYCG_EIGENEST_HPP

#include "polycg/linop.hpp"

#include <cstdint>
#include <vector>

namespace polycg {

struct EigOptions {
  double tol = 1e-4;
  int maxit = 200;
  std::uint64_t seed = 20240801;
};

struct EigResult {
  double value = 0.0;
  int iters = 0;
  std::uint64_t matvecs = 0;
  bool converged = false;
  // Rayleigh quotient after every iteration, for monotonicity checks
  // and reports.
  std::vector<double> trace;
};

// Largest eigenvalue by the power method. Stops when the Rayleigh
// quotient changes by less than tol relative, |b_new - b_old| <= tol b_new.
// Deterministic for a fixed seed: the start vector is pseudorandom
// uniform in [-1, 1] from a counter-based generator.
EigResult power_method(const LinearOperator& op, const EigOptions& opts = {});

// Smallest eigenvalue by nonlinear conjugate gradient minimization of
// the Rayleigh quotient q(x) = x'Ax / x'x (deflation-free DACG):
// exact line search over span{x, p} via the closed-form 2x2 generalized
// eigenproblem, Fletcher-Reeves beta restarted every 50 iterations.
// Stops when ||Ax - q x|| / (q ||x||) <= tol. Aborts with NumericalError
// if x'Ax <= 0 is detected (operator not positive definite).
EigResult dacg_smallest(const LinearOperator& op, const EigOptions& opts = {});

// Extremal-eigenvalue estimates of the (scaled) operator, as required
// before building the polynomial preconditioner.
struct SpectralBounds {
  double alpha0 = 0.0;
  double beta0 = 0.0;
  int alpha_iters = 0;
  int beta_iters = 0;
  std::uint64_t matvecs = 0;
  bool alpha_converged = false;
  bool beta_converged = false;
};

SpectralBounds estimate_bounds(const LinearOperator& op, const EigOptions& power_opts,
                               const EigOptions& dacg_opts);

// Deterministic start vector shared by the estimators: uniform [-1, 1]
// from splitmix64, identical across platforms for a fixed seed.
Vector random_uniform_vector(Index n, std::uint64_t seed);

}  // namespace polycg

#endif  // POLYCG_EIGENEST_HPP
