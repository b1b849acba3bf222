// SPDX-License-Identifier: Apache-2.0
//
// Test-only helpers: dense operator adapter, reproducible random SPD
// matrices with a prescribed spectral interval, and direct Chebyshev
// evaluation as an oracle independent of the library recursions.

#ifndef POLYCG_TESTS_SUPPORT_HPP
#define POLYCG_TESTS_SUPPORT_HPP

#include "polycg/eigenest.hpp"
#include "polycg/linop.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <utility>

namespace polycg::testing {

class DenseOperator : public LinearOperator {
public:
  explicit DenseOperator(Eigen::MatrixXd m) : LinearOperator(m.rows()), m_(std::move(m)) {}

  const Eigen::MatrixXd& matrix() const { return m_; }
  Vector diagonal() const override { return m_.diagonal(); }

private:
  void apply_impl(const Vector& x, Vector& y) const override { y.noalias() = m_ * x; }

  Eigen::MatrixXd m_;
};

// SPD matrix Q diag(lambda) Q' with lambda[0] = alpha, lambda[n-1] = beta
// and the rest uniform in between; Q from the QR factorization of a
// seeded random matrix. Returns the matrix and its spectrum (ascending).
inline std::pair<Eigen::MatrixXd, Vector> random_spd(Index n, double alpha, double beta,
                                                     std::uint64_t seed) {
  Vector lam = random_uniform_vector(n, seed);  // [-1, 1]
  lam = alpha + (beta - alpha) * (lam.array() + 1.0) / 2.0;
  std::sort(lam.begin(), lam.end());
  lam[0] = alpha;
  lam[n - 1] = beta;

  Eigen::MatrixXd g(n, n);
  for (Index j = 0; j < n; ++j) g.col(j) = random_uniform_vector(n, seed + 1000 + j);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  const Eigen::MatrixXd a = q * lam.asDiagonal() * q.transpose();
  return {0.5 * (a + a.transpose()), lam};
}

// First-kind Chebyshev polynomial, hyperbolic form outside [-1, 1].
inline double chebyshev_T(int k, double x) {
  if (std::abs(x) <= 1.0) return std::cos(k * std::acos(x));
  const double s = x < 0.0 && k % 2 == 1 ? -1.0 : 1.0;
  return s * std::cosh(k * std::acosh(std::abs(x)));
}

inline Eigen::MatrixXd dense_from_operator(const LinearOperator& op) {
  const Index n = op.size();
  Eigen::MatrixXd m(n, n);
  Vector e = Vector::Zero(n), col(n);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    m.col(j) = col;
    e[j] = 0.0;
  }
  return m;
}

}  // namespace polycg::testing

#endif  // POLYCG_TESTS_SUPPORT_HPP
