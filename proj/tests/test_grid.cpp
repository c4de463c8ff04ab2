#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "degrd/error.hpp"
#include "degrd/grid.hpp"
#include "test_util.hpp"

using namespace degrd;
using std::numbers::pi;

namespace {

std::vector<double> random_field(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> u(n);
  for (auto& v : u) v = test::unit(rng) - 0.5;
  return u;
}

double max_cosine_mode_error(int cells, double L) {
  const Grid grid(DomainSpec::box({L}), {cells});
  std::vector<double> u(grid.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::cos(pi * grid.center(i, 0) / L);
  const auto lu = laplacian_neumann(u, grid);
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(lu[i] + (pi / L) * (pi / L) * u[i]));
  return err;
}

}  // namespace

TEST(Grid, Geometry) {
  const Grid grid(DomainSpec::box({2.0, 3.0}), {4, 6});
  EXPECT_EQ(grid.size(), 24u);
  EXPECT_DOUBLE_EQ(grid.spacing(0), 0.5);
  EXPECT_DOUBLE_EQ(grid.spacing(1), 0.5);
  EXPECT_DOUBLE_EQ(grid.cell_volume(), 0.25);
  EXPECT_NEAR(grid.volume(), 6.0, 1e-12);
  EXPECT_EQ(grid.stride(1), 1u);
  EXPECT_EQ(grid.stride(0), 6u);
  // index 7 = (1, 1): centres at 0.75 and 0.75
  EXPECT_DOUBLE_EQ(grid.center(7, 0), 0.75);
  EXPECT_DOUBLE_EQ(grid.center(7, 1), 0.75);
}

TEST(Grid, RejectsMismatchedCells) {
  EXPECT_THROW(Grid(DomainSpec::box({1.0, 1.0}), {4}), Error);
  EXPECT_THROW(Grid(DomainSpec::box({1.0}), {0}), Error);
}

TEST(Laplacian, ConstantIsHarmonic) {
  const Grid grid(DomainSpec::box({1.0, 2.0, 0.5}), {3, 4, 5});
  const auto lu = laplacian_neumann(std::vector<double>(grid.size(), 3.7), grid);
  for (double v : lu) EXPECT_EQ(v, 0.0);
}

TEST(Laplacian, HandStencil) {
  const Grid grid(DomainSpec::box({3.0}), {3});
  const auto lu = laplacian_neumann(std::vector<double>{1.0, 2.0, 4.0}, grid);
  EXPECT_DOUBLE_EQ(lu[0], 1.0);
  EXPECT_DOUBLE_EQ(lu[1], 1.0);
  EXPECT_DOUBLE_EQ(lu[2], -2.0);
}

TEST(Laplacian, CosineModeConvergesAtSecondOrder) {
  double prev = max_cosine_mode_error(16, 2.0);
  for (int cells : {32, 64, 128}) {
    const double err = max_cosine_mode_error(cells, 2.0);
    EXPECT_GE(std::log2(prev / err), 1.9) << cells;
    prev = err;
  }
}

TEST(Laplacian, ConservativeSymmetricSemidefinite) {
  std::mt19937_64 rng(3);
  for (const auto& cells : std::vector<std::vector<int>>{{50}, {7, 11}, {4, 5, 6}}) {
    std::vector<double> lengths(cells.size());
    for (auto& l : lengths) l = 0.3 + 2.0 * test::unit(rng);
    const Grid grid(DomainSpec::box(lengths), cells);
    for (int k = 0; k < 20; ++k) {
      const auto u = random_field(grid.size(), rng);
      const auto v = random_field(grid.size(), rng);
      const auto lu = laplacian_neumann(u, grid);
      const auto lv = laplacian_neumann(v, grid);
      double scale = 0.0;
      for (double x : lu) scale += std::abs(x) * grid.cell_volume();
      EXPECT_LE(std::abs(integrate(lu, grid)), 1e-13 * scale);
      EXPECT_LE(test::rel(inner_product(lu, v, grid), inner_product(u, lv, grid)), 1e-12);
      EXPECT_LE(inner_product(lu, u, grid), 0.0);
      EXPECT_LE(test::rel(-inner_product(lu, u, grid), dirichlet_energy(u, grid)), 1e-12);
    }
  }
}

TEST(Integrate, MidpointRule) {
  const Grid grid(DomainSpec::box({2.0, 1.5}), {8, 3});
  EXPECT_NEAR(integrate(std::vector<double>(grid.size(), 1.0), grid), 3.0, 1e-14);
  EXPECT_NEAR(integrate(std::vector<double>(grid.size(), -2.5), grid), -7.5, 1e-14);

  const Grid line(DomainSpec::box({2.0}), {33});
  std::vector<double> u(line.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::cos(pi * line.center(i, 0) / 2.0);
  EXPECT_NEAR(integrate(u, line), 0.0, 1e-15);
}

TEST(LpNorm, Values) {
  const Grid grid(DomainSpec::box({2.0, 2.0}), {5, 5});
  const std::vector<double> k(grid.size(), 3.0);
  for (double p : {1.0, 1.5, 2.0, 3.0}) EXPECT_NEAR(lp_norm(k, p, grid), 3.0 * std::pow(4.0, 1.0 / p), 1e-13);
  EXPECT_DOUBLE_EQ(lp_norm(k, std::numeric_limits<double>::infinity(), grid), 3.0);

  const Grid two(DomainSpec::box({1.0}), {2});
  EXPECT_NEAR(lp_norm(std::vector<double>{3.0, 4.0}, 2.0, two), 3.5355339059327378, 1e-15);
  EXPECT_DOUBLE_EQ(lp_norm(std::vector<double>{3.0, -4.0}, std::numeric_limits<double>::infinity(), two), 4.0);
}

TEST(LpNorm, ExponentBelowOne) {
  const Grid grid(DomainSpec::box({1.0}), {2});
  try {
    lp_norm(std::vector<double>{1.0, 1.0}, 0.5, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_exponent);
  }
}

TEST(SqrtGradientEnergy, Values) {
  const Grid two(DomainSpec::box({2.0}), {2});
  EXPECT_DOUBLE_EQ(sqrt_gradient_energy(std::vector<double>{1.0, 4.0}, two), 1.0);
  const Grid grid(DomainSpec::box({1.0, 1.0}), {4, 4});
  EXPECT_EQ(sqrt_gradient_energy(std::vector<double>(16, 2.0), grid), 0.0);
}

TEST(SqrtGradientEnergy, CosineModeUnderRefinement) {
  const double L = 1.5;
  const double exact = 0.01 * (pi / L) * (pi / L) * (L / 2.0);
  for (int cells : {64, 256}) {
    const Grid grid(DomainSpec::box({L}), {cells});
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(1.0 + 0.1 * std::cos(pi * grid.center(i, 0) / L), 2);
    EXPECT_LE(test::rel(sqrt_gradient_energy(u, grid), exact), 0.01);
  }
}

TEST(SqrtGradientEnergy, RejectsNonPositive) {
  const Grid grid(DomainSpec::box({1.0}), {3});
  try {
    sqrt_gradient_energy(std::vector<double>{1.0, 0.0, 2.0}, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_positive);
  }
}

TEST(DeviationL2, Values) {
  const Grid two(DomainSpec::box({1.0}), {2});
  EXPECT_DOUBLE_EQ(deviation_l2(std::vector<double>{0.0, 2.0}, two), 1.0);
  EXPECT_EQ(deviation_l2(std::vector<double>{5.0, 5.0}, two), 0.0);

  std::mt19937_64 rng(9);
  const Grid grid(DomainSpec::box({1.3, 0.7}), {9, 6});
  for (int k = 0; k < 50; ++k) {
    const auto u = random_field(grid.size(), rng);
    const double mean = integrate(u, grid) / grid.volume();
    const double lhs = std::pow(deviation_l2(u, grid), 2);
    const double rhs = std::pow(lp_norm(u, 2.0, grid), 2) - mean * mean * grid.volume();
    EXPECT_LE(test::rel(lhs, rhs), 1e-12);
  }
}

TEST(Poincare, RandomFieldsSatisfyAnalyticConstant) {
  std::mt19937_64 rng(21);
  for (const auto& [lengths, cells] : std::vector<std::pair<std::vector<double>, std::vector<int>>>{
           {{1.0}, {128}}, {{2.0}, {40}}, {{1.0, 1.0}, {16, 16}}, {{2.0, 0.5}, {20, 5}}}) {
    const auto domain = DomainSpec::box(lengths);
    const Grid grid(domain, cells);
    for (int k = 0; k < 100; ++k) {
      const auto u = random_field(grid.size(), rng);
      EXPECT_LE(std::pow(deviation_l2(u, grid), 2), domain.poincare_constant * dirichlet_energy(u, grid));
    }
  }
}

TEST(Poincare, DiscreteEigenvalueSitsBelowContinuum) {
  // The lowest discrete Neumann mode has Rayleigh quotient (4/h^2) sin^2(pi h / 2L),
  // strictly below (pi/L)^2, so it misses the analytic constant by
  // (x / sin x)^2 - 1 with x = pi h / 2L.
  const double L = 1.0;
  const Grid grid(DomainSpec::box({L}), {128});
  const double lambda = smallest_neumann_eigenvalue(grid);
  EXPECT_NEAR(lambda, 9.8691089627801152, 1e-12);
  EXPECT_LT(lambda, pi * pi);

  std::vector<double> u(grid.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::cos(pi * grid.center(i, 0) / L);
  const double ratio = std::pow(deviation_l2(u, grid), 2) / (DomainSpec::box({L}).poincare_constant *
                                                             dirichlet_energy(u, grid));
  EXPECT_NEAR(ratio, 1.0000502009159197, 1e-12);
}
