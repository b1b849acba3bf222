// SPDX-License-Identifier: Apache-2.0

#ifndef POLYCG_SPECTRUM_HPP
#define POLYCG_SPECTRUM_HPP

#include "polycg/linop.hpp"
#include "polycg/polyprec.hpp"

#include <cstdint>
#include <vector>

namespace polycg {

// Eigenvalue distribution of the preconditioned matrix P_m(A) A,
// computed through the shared-eigenvector property: mu_s = lambda_s *
// p(lambda_s). The matrix P_m(A) A is never formed.
struct SpectrumReport {
  int m = 0;
  double scale = 1.0;
  Vector mu;  // sorted ascending
  double mu_min = 0.0;
  double mu_max = 0.0;
  double kappa = 0.0;
  Index l = 0;          // eigenvalues within 10% of the smallest
  bool positive = true; // false flags a preconditioner that is not SPD here
};

// Number of entries with mu / min(mu) < 1.1 (the minimum itself counts).
Index clustering_indicator(const Vector& mu);

template <typename Params>
SpectrumReport preconditioned_spectrum(const Vector& eigs_of_A, const Params& params);

extern template SpectrumReport preconditioned_spectrum<NewtonParams>(const Vector&,
                                                                     const NewtonParams&);
extern template SpectrumReport preconditioned_spectrum<ChebyshevParams>(const Vector&,
                                                                        const ChebyshevParams&);

enum class SolutionKind { ones, flat, random };

struct TableOptions {
  double tol = 1e-8;
  int maxit = 20000;
  SolutionKind solution = SolutionKind::ones;
  std::uint64_t seed = 20240801;
};

struct SpectrumTableRow {
  int m = 0;
  int iters = 0;
  double mu_max = 0.0;
  double mu_min = 0.0;
  Index l = 0;
  double kappa = 0.0;
};

// One row per degree: PCG solve of the Jacobi-scaled 2D FD Laplacian
// (exact solution per TableOptions, analytic extremal eigenvalues,
// Chebyshev-form preconditioner) plus the spectral analysis with the
// same parameters.
std::vector<SpectrumTableRow> spectrum_table(Index nx, const std::vector<int>& degrees,
                                             double scale, const TableOptions& opts = {});

}  // namespace polycg

#endif  // POLYCG_SPECTRUM_HPP
