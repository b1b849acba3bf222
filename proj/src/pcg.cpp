// SPDX-License-Identifier: Apache-2.0

#include "polycg/pcg.hpp"

#include <chrono>
#include <cmath>

namespace polycg {

std::pair<Vector, SolveReport> pcg_solve(const LinearOperator& op, const Vector& b,
                                         const SolveOptions& opts, Preconditioner* prec) {
  const Index n = op.size();
  if (b.size() != n) throw std::invalid_argument("pcg_solve: rhs length mismatch");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("pcg_solve: tol must be positive");
  if (opts.maxit < 1) throw std::invalid_argument("pcg_solve: maxit must be >= 1");
  if (opts.x0 && opts.x0->size() != n) {
    throw std::invalid_argument("pcg_solve: x0 length mismatch");
  }
  const int m = prec ? prec->degree() : 0;
  const auto t_start = std::chrono::steady_clock::now();

  SolveReport report;
  Vector x = opts.x0 ? *opts.x0 : Vector::Zero(n);
  Vector r(n), z(n), p(n), q(n);

  auto finish = [&](Vector&& sol) {
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                           .count();
    return std::make_pair(std::move(sol), report);
  };

  const double bnorm = b.norm();
  ++report.ddot;
  if (bnorm == 0.0) {
    report.converged = true;
    return finish(Vector::Zero(n));
  }

  if (opts.x0) {
    op.apply(x, r);
    ++report.matvec;
    r = b - r;
    const double rnorm = r.norm();
    ++report.ddot;
    report.rel_res = rnorm / bnorm;
    if (report.rel_res <= opts.tol) {
      report.converged = true;
      report.true_rel_res = report.rel_res;
      return finish(std::move(x));
    }
  } else {
    r = b;
    report.rel_res = 1.0;
  }

  if (prec) {
    prec->apply(op, r, z);
    ++report.prec_applies;
    report.matvec += static_cast<std::uint64_t>(m);
  } else {
    z = r;
  }
  p = z;
  double rho = r.dot(z);
  ++report.ddot;
  if (!std::isfinite(rho) || rho <= 0.0) {
    throw NumericalError("pcg_solve: r'z = " + std::to_string(rho) +
                         " at setup (preconditioner not SPD?)");
  }

  for (int it = 1; it <= opts.maxit; ++it) {
    op.apply(p, q);
    ++report.matvec;
    const double pq = p.dot(q);
    ++report.ddot;
    if (!std::isfinite(pq) || pq <= 0.0) {
      throw NumericalError("pcg_solve: p'Ap = " + std::to_string(pq) +
                           " (operator not SPD?)");
    }
    const double alpha = rho / pq;
    x += alpha * p;
    r -= alpha * q;
    const double rnorm = r.norm();
    ++report.ddot;
    if (!std::isfinite(rnorm)) throw NumericalError("pcg_solve: residual norm is not finite");
    report.iters = it;
    report.rel_res = rnorm / bnorm;
    if (opts.on_iterate) opts.on_iterate(it, x);
    if (report.rel_res <= opts.tol) {
      report.converged = true;
      break;
    }
    if (it == opts.maxit) break;
    if (prec) {
      prec->apply(op, r, z);
      ++report.prec_applies;
      report.matvec += static_cast<std::uint64_t>(m);
    } else {
      z = r;
    }
    const double rho_new = r.dot(z);
    ++report.ddot;
    if (!std::isfinite(rho_new) || rho_new <= 0.0) {
      throw NumericalError("pcg_solve: r'z = " + std::to_string(rho_new) +
                           " (preconditioner not SPD?)");
    }
    p = z + (rho_new / rho) * p;
    rho = rho_new;
  }

  // True residual recomputed once at exit.
  op.apply(x, q);
  ++report.matvec;
  report.true_rel_res = (b - q).norm() / bnorm;
  ++report.ddot;
  return finish(std::move(x));
}

Vector rhs_from_ones(const LinearOperator& op) {
  return op.apply(Vector::Ones(op.size()));
}

}  // namespace polycg
