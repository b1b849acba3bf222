// SPDX-License-Identifier: Apache-2.0

#include "polycg/spectrum.hpp"

#include "polycg/eigenest.hpp"
#include "polycg/pcg.hpp"

#include <algorithm>

namespace polycg {

Index clustering_indicator(const Vector& mu) {
  if (mu.size() == 0) throw std::invalid_argument("clustering_indicator: empty spectrum");
  const double mu_min = mu.minCoeff();
  if (!(mu_min > 0.0)) {
    throw std::invalid_argument("clustering_indicator: spectrum must be positive");
  }
  const double bound = 1.1 * mu_min;
  Index count = 0;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu[i] < bound) ++count;
  }
  return count;
}

template <typename Params>
SpectrumReport preconditioned_spectrum(const Vector& eigs_of_A, const Params& params) {
  if (eigs_of_A.size() == 0) {
    throw std::invalid_argument("preconditioned_spectrum: empty spectrum");
  }
  SpectrumReport report;
  if constexpr (std::is_same_v<Params, NewtonParams>) {
    report.m = params.degree();
  } else {
    report.m = params.m;
  }
  report.scale = params.scale;
  report.mu.resize(eigs_of_A.size());
  for (Index s = 0; s < eigs_of_A.size(); ++s) {
    const double lam = eigs_of_A[s];
    if (!(lam > 0.0)) {
      throw std::invalid_argument("preconditioned_spectrum: eigenvalues must be positive");
    }
    report.mu[s] = lam * eval_poly(params, lam);
  }
  std::sort(report.mu.begin(), report.mu.end());
  report.mu_min = report.mu[0];
  report.mu_max = report.mu[report.mu.size() - 1];
  report.positive = report.mu_min > 0.0;
  report.kappa = report.mu_max / report.mu_min;
  report.l = report.positive ? clustering_indicator(report.mu) : 0;
  return report;
}

template SpectrumReport preconditioned_spectrum<NewtonParams>(const Vector&, const NewtonParams&);
template SpectrumReport preconditioned_spectrum<ChebyshevParams>(const Vector&,
                                                                 const ChebyshevParams&);

std::vector<SpectrumTableRow> spectrum_table(Index nx, const std::vector<int>& degrees,
                                             double scale, const TableOptions& opts) {
  const StencilOperator problem(StencilKind::lap2d, nx);
  auto [scaled, inv_sqrt] = jacobi_scale(problem);
  const auto [alpha0, beta0] = analytic_extremes(StencilKind::lap2d, nx, true);
  const Vector eigs = analytic_spectrum(StencilKind::lap2d, nx, true);

  Vector exact;
  switch (opts.solution) {
    case SolutionKind::ones: exact = Vector::Ones(scaled.size()); break;
    case SolutionKind::flat: exact = flat_spectrum_vector(StencilKind::lap2d, nx); break;
    case SolutionKind::random: exact = random_uniform_vector(scaled.size(), opts.seed); break;
  }
  const Vector b = scaled.apply(exact);

  SolveOptions solve_opts;
  solve_opts.tol = opts.tol;
  solve_opts.maxit = opts.maxit;

  std::vector<SpectrumTableRow> rows;
  rows.reserve(degrees.size());
  for (const int m : degrees) {
    const ChebyshevParams params = cheb_params(alpha0, beta0, m, scale);
    ChebyshevPreconditioner prec(params);
    const auto [x, report] = pcg_solve(scaled, b, solve_opts, &prec);
    const SpectrumReport spec = preconditioned_spectrum(eigs, params);
    rows.push_back({m, report.iters, spec.mu_max, spec.mu_min, spec.l, spec.kappa});
  }
  return rows;
}

}  // namespace polycg
