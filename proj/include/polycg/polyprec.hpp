// SPDX-License-Identifier: Apache-2.0

#ifndef POLYCG_POLYPREC_HPP
#define POLYCG_POLYPREC_HPP

#include "polycg/linop.hpp"

#include <vector>

namespace polycg {

// Scaling sequence for the Newton-form polynomial preconditioner of
// degree 2^nlev - 1.
//
//   zeta_0 = 2 / (s (alpha0 + beta0)) = 1 / (s theta)
//   zeta_1 = 2 / (1 + 2 t - t^2)   with t = (s theta - delta) zeta_0
//   zeta_j = 2 / (1 + 2 zeta_{j-1} - zeta_{j-1}^2),   j >= 2.
//
// At s = 1 the seed t reduces to alpha0 * zeta_0. For s > 1 only the
// interval midpoint theta is scaled and the half-width delta is kept,
// which keeps the Newton and Chebyshev forms identical polynomials.
struct NewtonParams {
  int nlev = 0;
  double alpha0 = 0.0;
  double beta0 = 0.0;
  double scale = 1.0;
  std::vector<double> zeta;  // zeta[j], j = 0..nlev

  int degree() const { return (1 << nlev) - 1; }
};

// Interval parameters and rho sequence for the Chebyshev-form
// preconditioner of arbitrary degree m:
//   theta = s (alpha + beta) / 2, delta = (beta - alpha) / 2,
//   sigma = theta / delta, rho_0 = 1/sigma, rho_k = 1 / (2 sigma - rho_{k-1}).
struct ChebyshevParams {
  int m = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double scale = 1.0;
  double theta = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  std::vector<double> rho;  // rho[k], k = 0..m
};

// Builds the zeta sequence; validates 0 < alpha0 <= beta0, nlev >= 0,
// scale >= 1 and the positivity of the resulting polynomial on
// [alpha0, beta0] (1000-point grid).
NewtonParams newton_params(double alpha0, double beta0, int nlev, double scale = 1.0);

// Builds the interval parameters and rho sequence; requires
// 0 < alpha < beta (delta = 0 would divide by zero) and m >= 0.
ChebyshevParams cheb_params(double alpha, double beta, int m, double scale = 1.0);

// p_m(lambda) by the scalar mirror of the corresponding vector recursion.
// Both agree within roundoff when m = 2^nlev - 1 and the same
// (alpha, beta, scale) are used.
double eval_poly(const NewtonParams& params, double lambda);
double eval_poly(const ChebyshevParams& params, double lambda);

// chi_j = 2 sigma_k^2 / sigma_{2k}, k = 2^{j-1}, via the Chebyshev
// doubling rule sigma_{2k} = 2 sigma_k^2 - 1; identical to the zeta
// sequence of newton_params(alpha, beta, nlev). Guarded to nlev <= 30;
// once sigma_k exceeds 1e150 the remaining chi are 1 to double precision.
std::vector<double> chi_sequence(double alpha, double beta, int nlev);

// Scratch for the recursive Newton application: one vector per level.
struct NewtonWorkspace {
  std::vector<Vector> level;
};

// out = P_nlev r by the depth-nlev recursion (two recursive calls per
// level); uses exactly 2^nlev - 1 operator applications. out must not
// alias r.
void apply_newton(const NewtonParams& params, const LinearOperator& op, const Vector& r,
                  Vector& out, NewtonWorkspace& ws);
Vector apply_newton(const NewtonParams& params, const LinearOperator& op, const Vector& r);

// Scratch for the Chebyshev application: three vectors reused across
// calls, so a PCG solve performs no per-iteration allocation.
struct ChebyshevWorkspace {
  Vector x_old, x, z;
};

// out = p_m(A) r by the three-term recursion; exactly m operator
// applications. out must not alias r.
void apply_chebyshev(const ChebyshevParams& params, const LinearOperator& op, const Vector& r,
                     Vector& out, ChebyshevWorkspace& ws);
Vector apply_chebyshev(const ChebyshevParams& params, const LinearOperator& op, const Vector& r);

}  // namespace polycg

#endif  // POLYCG_POLYPREC_HPP
