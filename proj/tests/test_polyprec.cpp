// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polycg/polyprec.hpp"

#include "polycg/eigenest.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace polycg;
using polycg::testing::chebyshev_T;
using polycg::testing::DenseOperator;

TEST_CASE("zeta sequence fixed point at alpha = beta = 1") {
  const NewtonParams params = newton_params(1.0, 1.0, 4, 1.0);
  REQUIRE(params.zeta.size() == 5);
  for (const double z : params.zeta) CHECK(z == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zeta sequence for the analytic nx=78 bounds") {
  const NewtonParams params = newton_params(7.9064e-4, 1.99921, 1, 1.0);
  CHECK(params.zeta[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(params.zeta[1] == doctest::Approx(1.99684).epsilon(1e-5));
}

TEST_CASE("zeta sequence for (1, 3)") {
  const NewtonParams params = newton_params(1.0, 3.0, 2, 1.0);
  CHECK(params.zeta[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(params.zeta[1] == doctest::Approx(8.0 / 7.0).epsilon(1e-15));
  CHECK(params.zeta[2] == doctest::Approx(98.0 / 97.0).epsilon(1e-15));
}

TEST_CASE("chebyshev parameters for (1, 3, m=2)") {
  const ChebyshevParams params = cheb_params(1.0, 3.0, 2, 1.0);
  CHECK(params.theta == 2.0);
  CHECK(params.delta == 1.0);
  CHECK(params.sigma == 2.0);
  CHECK(params.rho[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(params.rho[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
  CHECK(params.rho[2] == doctest::Approx(7.0 / 26.0).epsilon(1e-15));
}

TEST_CASE("theta scaling multiplies theta only") {
  const ChebyshevParams params = cheb_params(7.9064e-4, 1.99921, 31, 1.01);
  CHECK(params.theta == doctest::Approx(1.01).epsilon(1e-5));
  CHECK(params.delta == doctest::Approx((1.99921 - 7.9064e-4) / 2.0).epsilon(1e-15));
  CHECK(params.sigma == doctest::Approx(params.theta / params.delta).epsilon(1e-15));
}

TEST_CASE("parameter preconditions") {
  CHECK_THROWS_AS(newton_params(0.0, 1.0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(newton_params(-1.0, 1.0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(newton_params(1.0, 2.0, -1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(newton_params(1.0, 2.0, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(cheb_params(1.0, 1.0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cheb_params(0.0, 1.0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cheb_params(1.0, 2.0, -1, 1.0), std::invalid_argument);
}

TEST_CASE("apply_newton base case is zeta0 r") {
  NewtonParams params = newton_params(2.0, 6.0, 0, 1.0);  // zeta0 = 2/8 = 0.25
  params.zeta[0] = 0.5;                                   // as stated in the example
  const DiagonalOperator id = DiagonalOperator::identity(2);
  Vector r(2);
  r << 2.0, 4.0;
  const Vector out = apply_newton(params, id, r);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 2.0);
}

TEST_CASE("identity operator is a fixed point of the Newton application") {
  const DiagonalOperator id = DiagonalOperator::identity(6);
  const Vector r = random_uniform_vector(6, 11);
  for (int nlev : {0, 1, 3, 5}) {
    const NewtonParams params = newton_params(1.0, 1.0, nlev, 1.0);
    const Vector out = apply_newton(params, id, r);
    CHECK((out - r).norm() <= 1e-14 * r.norm());
  }
}

TEST_CASE("hand-evaluated nlev=1 application on diag(1,3)") {
  Vector d(2);
  d << 1.0, 3.0;
  const DiagonalOperator op(d);
  const NewtonParams params = newton_params(1.0, 3.0, 1, 1.0);
  Vector r(2);
  r << 1.0, 1.0;
  const Vector out = apply_newton(params, op, r);
  CHECK(out[0] == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));

  const ChebyshevParams cheb = cheb_params(1.0, 3.0, 1, 1.0);
  const Vector out_cheb = apply_chebyshev(cheb, op, r);
  CHECK(out_cheb[0] == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK(out_cheb[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("chebyshev m=0 returns r/theta") {
  const ChebyshevParams params = cheb_params(1.0, 3.0, 0, 1.0);
  const DiagonalOperator id = DiagonalOperator::identity(3);
  Vector r(3);
  r << 2.0, -4.0, 6.0;
  const Vector out = apply_chebyshev(params, id, r);
  CHECK(out == Vector(r / 2.0));
}

TEST_CASE("newton and chebyshev applications are the same polynomial") {
  const auto [a, lam] = polycg::testing::random_spd(50, 0.02, 1.95, 31);
  const DenseOperator op(a);
  const Vector r = random_uniform_vector(50, 32);
  for (const double scale : {1.0, 1.01}) {
    const NewtonParams newton = newton_params(0.02, 1.95, 5, scale);
    const ChebyshevParams cheb = cheb_params(0.02, 1.95, 31, scale);
    const Vector out_newton = apply_newton(newton, op, r);
    const Vector out_cheb = apply_chebyshev(cheb, op, r);
    CHECK((out_newton - out_cheb).norm() <= 1e-10 * out_newton.norm());
  }
}

TEST_CASE("equivalence property over random SPD operators") {
  int index = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 20 + (trial * 7) % 180;
    const double alpha = 0.005 + 0.01 * (trial % 5);
    const double beta = 1.5 + 0.1 * (trial % 4);
    const auto [a, lam] = polycg::testing::random_spd(n, alpha, beta, 5000 + trial);
    const DenseOperator op(a);
    const Vector r = random_uniform_vector(n, 6000 + trial);
    const int nlev = trial % 7;
    const double scale = trial % 2 == 0 ? 1.0 : 1.01;
    const NewtonParams newton = newton_params(alpha, beta, nlev, scale);
    const ChebyshevParams cheb = cheb_params(alpha, beta, newton.degree(), scale);
    const Vector out_newton = apply_newton(newton, op, r);
    const Vector out_cheb = apply_chebyshev(cheb, op, r);
    CHECK((out_newton - out_cheb).norm() <= 1e-10 * out_newton.norm());
    ++index;
  }
  CHECK(index == 50);
}

TEST_CASE("scalar evaluation at the fixed point") {
  for (int nlev : {0, 2, 5}) {
    const NewtonParams params = newton_params(1.0, 1.0, nlev, 1.0);
    CHECK(eval_poly(params, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("scalar evaluation of the (1,3) degree-1 polynomial") {
  const ChebyshevParams params = cheb_params(1.0, 3.0, 1, 1.0);
  CHECK(eval_poly(params, 2.0) == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("scalar forms agree for m = 2^nlev - 1") {
  for (const double scale : {1.0, 1.01}) {
    for (int nlev : {0, 1, 3, 6}) {
      const NewtonParams newton = newton_params(0.01, 1.99, nlev, scale);
      const ChebyshevParams cheb = cheb_params(0.01, 1.99, newton.degree(), scale);
      for (int g = 0; g <= 100; ++g) {
        const double lam = 0.01 + (1.99 - 0.01) * g / 100.0;
        const double pn = eval_poly(newton, lam);
        const double pc = eval_poly(cheb, lam);
        CHECK(pn == doctest::Approx(pc).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("optimality: grid max of |1 - lambda p(lambda)| equals 1/T_{m+1}(sigma)") {
  const std::pair<double, double> intervals[] = {{7.9064e-4, 1.99921}, {1e-3, 1.0}, {0.02, 2.0}};
  for (const auto& [alpha, beta] : intervals) {
    for (const int m : {1, 3, 7, 15, 31}) {
      const ChebyshevParams params = cheb_params(alpha, beta, m, 1.0);
      const double expected = 1.0 / chebyshev_T(m + 1, params.sigma);
      double grid_max = 0.0;
      constexpr int kGrid = 20000;
      for (int g = 0; g <= kGrid; ++g) {
        const double lam = alpha + (beta - alpha) * g / kGrid;
        grid_max = std::max(grid_max, std::abs(1.0 - lam * eval_poly(params, lam)));
      }
      CHECK(grid_max == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectral mapping: composed Newton levels stay in the predicted intervals") {
  const double alpha0 = 7.9064e-4, beta0 = 1.99921;
  const int nlev = 5;
  const NewtonParams params = newton_params(alpha0, beta0, nlev, 1.0);

  // Predicted interval ends: alpha_{j+1} = f(alpha_j zeta_j), f(t) = 2t - t^2.
  auto f = [](double t) { return 2.0 * t - t * t; };
  std::vector<double> alpha(nlev + 1);
  alpha[0] = alpha0;
  double az = alpha0 * params.zeta[0];
  for (int j = 1; j <= nlev; ++j) {
    alpha[j] = f(az);
    az = alpha[j] * params.zeta[j];
  }

  // Uniform grid plus the exact peak preimages, so that the grid attains
  // both interval ends to machine precision. The peak of level j sits at
  // t_{j-1} = 1; inverting t_i = zeta_i f(t_{i-1}) on the increasing
  // branch gives t_{i-1} = 1 - sqrt(1 - t_i / zeta_i), down to
  // lambda = t_0 / zeta_0.
  std::vector<double> grid;
  constexpr int kGrid = 10000;
  for (int g = 0; g <= kGrid; ++g) grid.push_back(alpha0 + (beta0 - alpha0) * g / kGrid);
  auto t_level = [&](double lam, int levels) {
    double t = params.zeta[0] * lam;
    for (int j = 1; j <= levels; ++j) t = params.zeta[j] * f(t);
    return t;
  };
  for (int j = 1; j <= nlev; ++j) {
    double target = 1.0;
    for (int i = j - 1; i >= 1; --i) {
      target = 1.0 - std::sqrt(std::max(0.0, 1.0 - target / params.zeta[i]));
    }
    grid.push_back(target / params.zeta[0]);
  }

  for (int j = 1; j <= nlev; ++j) {
    double mn = 1e300, mx = -1e300;
    for (const double lam : grid) {
      const double s = f(t_level(lam, j - 1));  // pre-scaling value at level j
      mn = std::min(mn, s);
      mx = std::max(mx, s);
    }
    CHECK(std::abs(mn - alpha[j]) <= 1e-10);
    CHECK(std::abs(mx - 1.0) <= 1e-10);
    CHECK(mx <= 1.0 + 1e-12);
  }
}

TEST_CASE("shared eigenvectors of the preconditioned matrix") {
  const CsrMatrix a = assemble_laplacian(StencilKind::lap2d, 6);
  const auto [scaled, inv_sqrt] = jacobi_scale(a);
  const Eigen::MatrixXd dense = polycg::testing::dense_from_operator(scaled);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  const ChebyshevParams params = cheb_params(es.eigenvalues()(0),
                                             es.eigenvalues()(dense.rows() - 1), 7, 1.0);
  for (const Index which : {Index{0}, Index{10}, Index{35}}) {
    const double lam = es.eigenvalues()(which);
    const Vector v = es.eigenvectors().col(which);
    const Vector av = scaled.apply(v);
    const Vector pav = apply_chebyshev(params, scaled, av);
    CHECK((pav - lam * eval_poly(params, lam) * v).norm() <= 1e-10 * v.norm());
  }
}

TEST_CASE("newton error decay: |1 - lambda p(lambda)| <= r^(2^j) with unit zeta") {
  // P0 = zeta I with zeta lambda in (0, 2); unscaled recursion squares the
  // error polynomial at every level.
  NewtonParams params;
  params.nlev = 4;
  params.alpha0 = 0.5;
  params.beta0 = 1.2;
  params.scale = 1.0;
  params.zeta.assign(5, 1.0);

  const double r = 0.5;  // max |1 - lambda| on [0.5, 1.2]
  for (int j = 0; j <= 4; ++j) {
    NewtonParams level = params;
    level.nlev = j;
    level.zeta.assign(static_cast<std::size_t>(j) + 1, 1.0);
    double grid_max = 0.0;
    for (int g = 0; g <= 5000; ++g) {
      const double lam = 0.5 + (1.2 - 0.5) * g / 5000.0;
      grid_max = std::max(grid_max, std::abs(1.0 - lam * eval_poly(level, lam)));
    }
    CHECK(grid_max <= std::pow(r, std::pow(2.0, j)) + 1e-12);
  }
}

TEST_CASE("application costs match the degree") {
  const StencilOperator op(StencilKind::lap2d, 6);
  const Vector r = random_uniform_vector(op.size(), 5);
  for (int nlev : {0, 1, 3, 5}) {
    const NewtonParams params = newton_params(0.1, 1.9, nlev, 1.0);
    op.reset_matvec_count();
    (void)apply_newton(params, op, r);
    CHECK(op.matvec_count() == static_cast<std::uint64_t>((1 << nlev) - 1));
  }
  for (int m : {0, 1, 2, 5, 12}) {
    const ChebyshevParams params = cheb_params(0.1, 1.9, m, 1.0);
    op.reset_matvec_count();
    (void)apply_chebyshev(params, op, r);
    CHECK(op.matvec_count() == static_cast<std::uint64_t>(m));
  }
}

TEST_CASE("positivity holds on the spectral interval for tested parameter sets") {
  for (const double scale : {1.0, 1.01, 1.1}) {
    for (const int m : {0, 1, 3, 7, 15, 31, 63}) {
      const ChebyshevParams params = cheb_params(7.9064e-4, 1.99921, m, scale);
      for (int g = 0; g <= 2000; ++g) {
        const double lam = 7.9064e-4 + (1.99921 - 7.9064e-4) * g / 2000.0;
        CHECK(eval_poly(params, lam) > 0.0);
      }
    }
  }
}

TEST_CASE("chi sequence hand values and limits") {
  const std::vector<double> chi = chi_sequence(1.0, 3.0, 2);
  REQUIRE(chi.size() == 2);
  CHECK(chi[0] == doctest::Approx(8.0 / 7.0).epsilon(1e-15));
  CHECK(chi[1] == doctest::Approx(98.0 / 97.0).epsilon(1e-15));

  // chi_j -> 1 as sigma -> infinity (well-conditioned operator)
  const std::vector<double> tight = chi_sequence(1.0, 1.0 + 1e-9, 30);
  CHECK(tight.back() == 1.0);
  CHECK(tight.front() == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(chi_sequence(1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(chi_sequence(1.0, 2.0, 31), std::invalid_argument);
}

TEST_CASE("chi sequence equals the zeta sequence") {
  const int nlev = 10;
  const NewtonParams params = newton_params(0.01, 1.99, nlev, 1.0);
  const std::vector<double> chi = chi_sequence(0.01, 1.99, nlev);
  REQUIRE(chi.size() == static_cast<std::size_t>(nlev));
  for (int j = 1; j <= nlev; ++j) {
    CHECK(chi[j - 1] == doctest::Approx(params.zeta[j]).epsilon(1e-12));
  }
}

TEST_CASE("workspace reuse gives identical results") {
  const StencilOperator op(StencilKind::lap2d, 5);
  const NewtonParams params = newton_params(0.05, 1.95, 3, 1.0);
  NewtonWorkspace ws;
  Vector out1, out2;
  const Vector r1 = random_uniform_vector(op.size(), 81);
  const Vector r2 = random_uniform_vector(op.size(), 82);
  apply_newton(params, op, r1, out1, ws);
  apply_newton(params, op, r2, out2, ws);
  CHECK(out1 == apply_newton(params, op, r1));
  CHECK(out2 == apply_newton(params, op, r2));

  const ChebyshevParams cheb = cheb_params(0.05, 1.95, 7, 1.0);
  ChebyshevWorkspace cws;
  apply_chebyshev(cheb, op, r1, out1, cws);
  apply_chebyshev(cheb, op, r2, out2, cws);
  CHECK(out1 == apply_chebyshev(cheb, op, r1));
  CHECK(out2 == apply_chebyshev(cheb, op, r2));
}
