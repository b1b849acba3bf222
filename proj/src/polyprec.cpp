// SPDX-License-Identifier: Apache-2.0

#include "polycg/polyprec.hpp"

#include <cmath>
#include <string>

namespace polycg {

namespace {

// SPD contract: p must stay positive on the spectral interval.
template <typename Params>
void check_positivity(const Params& params, double lo, double hi) {
  constexpr int kGrid = 1000;
  for (int g = 0; g < kGrid; ++g) {
    const double lam = lo + (hi - lo) * static_cast<double>(g) / (kGrid - 1);
    if (!(eval_poly(params, lam) > 0.0)) {
      throw NumericalError("polynomial preconditioner not positive at lambda = " +
                           std::to_string(lam));
    }
  }
}

}  // namespace

NewtonParams newton_params(double alpha0, double beta0, int nlev, double scale) {
  if (!(alpha0 > 0.0) || !(beta0 >= alpha0)) {
    throw std::invalid_argument("newton_params: need 0 < alpha0 <= beta0");
  }
  if (nlev < 0) throw std::invalid_argument("newton_params: nlev must be >= 0");
  if (!(scale >= 1.0)) throw std::invalid_argument("newton_params: scale must be >= 1");

  NewtonParams params;
  params.nlev = nlev;
  params.alpha0 = alpha0;
  params.beta0 = beta0;
  params.scale = scale;
  params.zeta.resize(static_cast<std::size_t>(nlev) + 1);

  const double theta = 0.5 * (alpha0 + beta0);
  const double delta = 0.5 * (beta0 - alpha0);
  params.zeta[0] = 1.0 / (scale * theta);
  if (nlev >= 1) {
    const double t = (scale * theta - delta) * params.zeta[0];
    params.zeta[1] = 2.0 / (1.0 + 2.0 * t - t * t);
    for (int j = 2; j <= nlev; ++j) {
      const double z = params.zeta[j - 1];
      params.zeta[j] = 2.0 / (1.0 + 2.0 * z - z * z);
    }
  }
  check_positivity(params, alpha0, beta0);
  return params;
}

ChebyshevParams cheb_params(double alpha, double beta, int m, double scale) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cheb_params: alpha must be positive");
  if (!(beta > alpha)) {
    throw std::invalid_argument("cheb_params: need alpha < beta (delta = 0 divides by zero)");
  }
  if (m < 0) throw std::invalid_argument("cheb_params: m must be >= 0");
  if (!(scale >= 1.0)) throw std::invalid_argument("cheb_params: scale must be >= 1");

  ChebyshevParams params;
  params.m = m;
  params.alpha = alpha;
  params.beta = beta;
  params.scale = scale;
  params.theta = scale * 0.5 * (alpha + beta);
  params.delta = 0.5 * (beta - alpha);
  params.sigma = params.theta / params.delta;
  params.rho.resize(static_cast<std::size_t>(m) + 1);
  params.rho[0] = 1.0 / params.sigma;
  for (int k = 1; k <= m; ++k) {
    params.rho[k] = 1.0 / (2.0 * params.sigma - params.rho[k - 1]);
  }
  check_positivity(params, alpha, beta);
  return params;
}

double eval_poly(const NewtonParams& params, double lambda) {
  double r = params.zeta[0];
  for (int j = 1; j <= params.nlev; ++j) {
    r = params.zeta[j] * (2.0 * r - lambda * r * r);
  }
  return r;
}

double eval_poly(const ChebyshevParams& params, double lambda) {
  double p_prev = 0.0;
  double p = 1.0 / params.theta;
  for (int k = 1; k <= params.m; ++k) {
    const double p_new =
        params.rho[k] * (2.0 * params.sigma * (1.0 - lambda / params.theta) * p -
                         params.rho[k - 1] * p_prev + 2.0 / params.delta);
    p_prev = p;
    p = p_new;
  }
  return p;
}

std::vector<double> chi_sequence(double alpha, double beta, int nlev) {
  if (!(alpha > 0.0) || !(beta > alpha)) {
    throw std::invalid_argument("chi_sequence: need 0 < alpha < beta");
  }
  if (nlev < 0 || nlev > 30) {
    throw std::invalid_argument("chi_sequence: nlev must be in [0, 30]");
  }
  std::vector<double> chi(static_cast<std::size_t>(nlev));
  double sigma_k = (alpha + beta) / (beta - alpha);
  bool huge = false;
  for (int j = 0; j < nlev; ++j) {
    if (huge || sigma_k > 1e150) {
      // 2 sigma_k^2 would overflow; chi = 1/(1 - 1/(2 sigma_k^2)) is 1
      // to double precision from here on.
      huge = true;
      chi[j] = 1.0;
      continue;
    }
    const double sigma_2k = 2.0 * sigma_k * sigma_k - 1.0;
    chi[j] = 2.0 * sigma_k * sigma_k / sigma_2k;
    sigma_k = sigma_2k;
  }
  return chi;
}

// ---------------------------------------------------------------------------
// Vector application

namespace {

// out = P_j r. r_in may alias out: it is fully consumed before out is
// written at every level, which is what makes the single scratch vector
// per level sufficient.
void newton_rec(const NewtonParams& params, const LinearOperator& op, int j,
                const Vector& r_in, Vector& out, NewtonWorkspace& ws) {
  if (j == 0) {
    out = params.zeta[0] * r_in;
    return;
  }
  Vector& u = ws.level[static_cast<std::size_t>(j) - 1];
  newton_rec(params, op, j - 1, r_in, u, ws);  // u = P_{j-1} r
  op.apply(u, out);                            // out = A u
  newton_rec(params, op, j - 1, out, out, ws); // out = P_{j-1} A u
  out = params.zeta[j] * (2.0 * u - out);
}

}  // namespace

void apply_newton(const NewtonParams& params, const LinearOperator& op, const Vector& r,
                  Vector& out, NewtonWorkspace& ws) {
  if (r.size() != op.size()) {
    throw std::invalid_argument("apply_newton: vector length mismatch");
  }
  if (ws.level.size() != static_cast<std::size_t>(params.nlev)) {
    ws.level.assign(static_cast<std::size_t>(params.nlev), Vector(op.size()));
  }
  out.resize(op.size());
  newton_rec(params, op, params.nlev, r, out, ws);
}

Vector apply_newton(const NewtonParams& params, const LinearOperator& op, const Vector& r) {
  NewtonWorkspace ws;
  Vector out;
  apply_newton(params, op, r, out, ws);
  return out;
}

void apply_chebyshev(const ChebyshevParams& params, const LinearOperator& op, const Vector& r,
                     Vector& out, ChebyshevWorkspace& ws) {
  if (r.size() != op.size()) {
    throw std::invalid_argument("apply_chebyshev: vector length mismatch");
  }
  const double theta = params.theta;
  const double delta = params.delta;
  const double sigma = params.sigma;
  const int m = params.m;

  if (m == 0) {
    out = r / theta;
    return;
  }
  Vector& x_old = ws.x_old;
  Vector& x = ws.x;
  Vector& z = ws.z;

  x_old = r / theta;
  op.apply(r, z);  // z = A r
  x = (2.0 * params.rho[1] / delta) * (2.0 * r - z / theta);
  for (int k = 2; k <= m; ++k) {
    op.apply(x, z);  // z = A x
    z = (2.0 / delta) * (r - z);
    // x_old receives p_k, then swaps into x.
    x_old = params.rho[k] * (2.0 * sigma * x - params.rho[k - 1] * x_old + z);
    x_old.swap(x);
  }
  out = x;
}

Vector apply_chebyshev(const ChebyshevParams& params, const LinearOperator& op, const Vector& r) {
  ChebyshevWorkspace ws;
  Vector out;
  apply_chebyshev(params, op, r, out, ws);
  return out;
}

}  // namespace polycg
