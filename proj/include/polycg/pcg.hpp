// SPDX-License-Identifier: Apache-2.0

#ifndef POLYCG_PCG_HPP
#define POLYCG_PCG_HPP

#include "polycg/linop.hpp"
#include "polycg/polyprec.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>

namespace polycg {

// Preconditioner contract for the solver: z = P r, with degree() the
// number of operator applications one P r costs (for the counter
// bookkeeping). apply is non-const so implementations can own workspace;
// give each concurrent solve its own instance.
class Preconditioner {
public:
  virtual ~Preconditioner() = default;
  virtual void apply(const LinearOperator& op, const Vector& r, Vector& z) = 0;
  virtual int degree() const = 0;
};

class NewtonPreconditioner : public Preconditioner {
public:
  explicit NewtonPreconditioner(NewtonParams params) : params_(std::move(params)) {}

  void apply(const LinearOperator& op, const Vector& r, Vector& z) override {
    apply_newton(params_, op, r, z, ws_);
  }
  int degree() const override { return params_.degree(); }
  const NewtonParams& params() const { return params_; }

private:
  NewtonParams params_;
  NewtonWorkspace ws_;
};

class ChebyshevPreconditioner : public Preconditioner {
public:
  explicit ChebyshevPreconditioner(ChebyshevParams params) : params_(std::move(params)) {}

  void apply(const LinearOperator& op, const Vector& r, Vector& z) override {
    apply_chebyshev(params_, op, r, z, ws_);
  }
  int degree() const override { return params_.m; }
  const ChebyshevParams& params() const { return params_; }

private:
  ChebyshevParams params_;
  ChebyshevWorkspace ws_;
};

struct SolveOptions {
  double tol = 1e-8;
  int maxit = 20000;
  // Initial guess; nullptr means the zero vector.
  const Vector* x0 = nullptr;
  // Called after every iteration with (iteration, current x).
  std::function<void(int, const Vector&)> on_iterate;
};

// Counters and residuals of one solve. ddot counts every inner product
// and norm evaluation inside the instrumented solve (ddot = 3 iters + c,
// c <= 2: one setup norm, one setup inner product, and per iteration
// p'q, ||r|| and r'z, the last skipped on the stopping iteration; the
// exit true-residual norm is the +1 that makes c = 2). matvec counts
// solver and preconditioner applications plus the one exit true-residual
// product: iters (m+1) + c' with c' <= m + 2.
struct SolveReport {
  int iters = 0;
  std::uint64_t ddot = 0;
  std::uint64_t matvec = 0;
  std::uint64_t prec_applies = 0;
  double rel_res = 0.0;       // recursive relative residual at exit
  double true_rel_res = 0.0;  // ||b - A x|| / ||b|| recomputed at exit
  double wall_time = 0.0;     // seconds
  bool converged = false;
};

// Preconditioned Conjugate Gradient, Hestenes-Stiefel form: one matvec,
// one preconditioner application, two inner products and one norm per
// iteration; convergence on the recursive residual, ||r_k||/||b|| <= tol.
// prec == nullptr runs unpreconditioned CG. Throws NumericalError when a
// non-finite value or p'Ap <= 0 appears.
std::pair<Vector, SolveReport> pcg_solve(const LinearOperator& op, const Vector& b,
                                         const SolveOptions& opts = {},
                                         Preconditioner* prec = nullptr);

// b = A * ones, the right-hand side whose exact solution is all ones.
Vector rhs_from_ones(const LinearOperator& op);

}  // namespace polycg

#endif  // POLYCG_PCG_HPP
