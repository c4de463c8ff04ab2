#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "degrd/analysis.hpp"
#include "degrd/error.hpp"

using namespace degrd;

namespace {

std::vector<double> linspace(double t0, double t1, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t0 + (t1 - t0) * i / (n - 1);
  return t;
}

FunctionalSample with_diag(double t, std::map<std::string, double> diag) {
  FunctionalSample s;
  s.t = t;
  s.diag_norms = std::move(diag);
  return s;
}

}  // namespace

TEST(FitSubexponential, RecoversExponential) {
  const auto t = linspace(0, 10, 101);
  std::vector<double> e;
  for (double x : t) e.push_back(3.0 * std::exp(-2.0 * x));
  const auto fit = fit_subexponential(t, e);
  EXPECT_NEAR(fit.alpha, 1.0, 0.01 + 1e-12);
  EXPECT_NEAR(fit.S2, 2.0, 0.04);
  EXPECT_NEAR(fit.S1, 3.0 * std::exp(2.0), 0.02 * 3.0 * std::exp(2.0));
  EXPECT_TRUE(fit.envelope_holds);
}

TEST(FitSubexponential, RecoversStretchedExponential) {
  const auto t = linspace(0, 200, 201);
  std::vector<double> e;
  for (double x : t) e.push_back(std::exp(-std::pow(1.0 + x, 0.5)));
  const auto fit = fit_subexponential(t, e);
  EXPECT_NEAR(fit.alpha, 0.5, 0.01 + 1e-12);
  EXPECT_NEAR(fit.S2, 1.0, 0.02);
}

TEST(FitSubexponential, EnvelopeCoversEverySample) {
  const auto t = linspace(0, 30, 121);
  std::vector<double> e;
  for (std::size_t i = 0; i < t.size(); ++i) {
    e.push_back(std::exp(-0.7 * std::pow(1.0 + t[i], 0.8)) * (1.0 + 0.3 * std::sin(3.0 * t[i])));
  }
  const auto fit = fit_subexponential(t, e);
  EXPECT_TRUE(fit.envelope_holds);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_LE(e[i], fit.S1 * std::exp(-fit.S2 * std::pow(1.0 + t[i], fit.alpha)) * (1 + 1e-9));
  }
}

TEST(FitSubexponential, Errors) {
  const auto t = linspace(0, 10, 50);
  try {
    fit_subexponential(t, std::vector<double>(50, 0.3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_decaying);
  }
  try {
    fit_subexponential(t, std::vector<double>(50, 1e-15));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::already_converged);
  }
  EXPECT_THROW(fit_subexponential(linspace(0, 1, 5), std::vector<double>(5, 1.0)), Error);
}

TEST(FitSubexponential, FloorSamplesAreExcluded) {
  const auto t = linspace(0, 40, 401);
  std::vector<double> e;
  for (double x : t) e.push_back(std::max(std::exp(-x), 1e-20));
  const auto fit = fit_subexponential(t, e);
  EXPECT_LT(fit.t_last, 32.3);
  EXPECT_NEAR(fit.alpha, 1.0, 0.01 + 1e-12);
}

TEST(TheoremEnvelope, Thresholds) {
  EXPECT_NEAR(theoretical_alpha(DiffusionMode::db0, 1), 0.99 / 6.0, 1e-15);
  EXPECT_NEAR(theoretical_alpha(DiffusionMode::db0, 5), 0.99 / 4.0, 1e-15);
  EXPECT_NEAR(theoretical_alpha(DiffusionMode::dc0, 3), 1.99 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(theoretical_alpha(DiffusionMode::full, 2), 0.95);
  try {
    theoretical_alpha(DiffusionMode::dc0, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported);
  }
}

TEST(TheoremEnvelope, OneSidedPass) {
  DecayFit fit;
  fit.envelope_holds = true;
  fit.alpha = 0.97;
  EXPECT_TRUE(check_theorem_envelope(fit, DiffusionMode::db0, 1).pass);
  fit.alpha = 0.50;
  EXPECT_FALSE(check_theorem_envelope(fit, DiffusionMode::dc0, 3).pass);
  fit.alpha = 0.99 / 6.0;
  EXPECT_TRUE(check_theorem_envelope(fit, DiffusionMode::db0, 2).pass);
  fit.alpha = 0.97;
  fit.envelope_holds = false;
  EXPECT_FALSE(check_theorem_envelope(fit, DiffusionMode::db0, 1).pass);
  fit.envelope_holds = true;
  EXPECT_TRUE(check_theorem_envelope(fit, DiffusionMode::db0, 5).reported_only);
}

TEST(BalanceAudit, EquilibriumIsZero) {
  const auto t = linspace(0, 1, 11);
  const std::vector<double> zero(11, 0.0);
  EXPECT_EQ(entropy_balance_audit(t, zero, zero).max_relative_residual, 0.0);
}

TEST(BalanceAudit, CentralDifferenceErrorIsSecondOrder) {
  const auto residual = [](int n) {
    const auto t = linspace(0, 2, n);
    std::vector<double> e, d;
    for (double x : t) {
      e.push_back(std::exp(-x));
      d.push_back(std::exp(-x));
    }
    return entropy_balance_audit(t, e, d).max_relative_residual;
  };
  const double h1 = residual(21), h2 = residual(41);
  // (cosh h - 1)... the relative error is sinh(h)/h - 1 ~ h^2 / 6.
  EXPECT_NEAR(h1, std::sinh(0.1) / 0.1 - 1.0, 1e-12);
  EXPECT_NEAR(h1 / h2, 4.0, 0.01);
}

TEST(BalanceAudit, SamplingErrors) {
  try {
    entropy_balance_audit(std::vector<double>{0, 1, 3}, std::vector<double>{1, 1, 1}, std::vector<double>{1, 1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_sampling);
  }
  EXPECT_THROW(entropy_balance_audit(std::vector<double>{0, 1}, std::vector<double>{1, 1}, std::vector<double>{1, 1}),
               Error);
}

TEST(Growth, ConstantAndSaturatingSeries) {
  const auto t = linspace(0, 10, 21);
  const auto c = fit_growth("b_l32", t, std::vector<double>(21, 2.5), 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(c.fitted_constant, 2.5);
  EXPECT_EQ(c.max_ratio_time, 0.0);
  std::vector<double> v;
  for (double x : t) v.push_back(std::pow(1.0 + x, 5.0 / 6.0));
  EXPECT_NEAR(fit_growth("b_l32", t, v, 5.0 / 6.0).fitted_constant, 1.0, 1e-15);
}

TEST(Growth, TimeShiftNeverIncreasesConstant) {
  const auto t = linspace(0, 10, 21);
  std::vector<double> v, shifted;
  for (double x : t) {
    v.push_back(3.0 / (1.0 + x) + 1.0);
    shifted.push_back(x + 2.5);
  }
  EXPECT_LE(fit_growth("x", shifted, v, 1.0 / 3.0).fitted_constant, fit_growth("x", t, v, 1.0 / 3.0).fitted_constant);
}

TEST(Growth, SelectionPerMode) {
  std::vector<FunctionalSample> s;
  for (int k = 0; k < 5; ++k) {
    s.push_back(with_diag(k, {{diag::b_l32, 1.0},
                              {diag::a_l32, 1.0},
                              {diag::b_lN2, 1.0},
                              {diag::c_l3, 1.0},
                              {diag::int_a2ac, 1.0 * k},
                              {diag::int_b2bc, 2.0 * k}}));
  }
  EXPECT_EQ(growth_diagnostics(s, DiffusionMode::full, 2).size(), 0u);
  EXPECT_EQ(growth_diagnostics(s, DiffusionMode::db0, 1).size(), 1u);
  const auto db0 = growth_diagnostics(s, DiffusionMode::db0, 3);
  ASSERT_EQ(db0.size(), 2u);
  EXPECT_NEAR(db0[1].exponent_target, 0.5, 1e-15);
  const auto dc0 = growth_diagnostics(s, DiffusionMode::dc0, 2);
  ASSERT_EQ(dc0.size(), 5u);
  for (const auto& g : dc0) EXPECT_TRUE(std::isfinite(g.fitted_constant));

  s[2].diag_norms.erase(diag::c_l3);
  try {
    growth_diagnostics(s, DiffusionMode::dc0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_diagnostic);
  }
}

TEST(DeviationRelation, MinimumRatio) {
  std::vector<FunctionalSample> s(3);
  for (int k = 0; k < 3; ++k) {
    s[k].t = k;
    s[k].dev_A2 = 1.0;
    s[k].dev_B2 = 1.0;
    s[k].D = 2.0 * (3.0 - k);
  }
  const auto r = fit_deviation_relation(s, 1.0);
  // D (1 + t) / sum = (6, 8, 6) / 2
  EXPECT_DOUBLE_EQ(r.constant, 3.0);
  EXPECT_EQ(r.samples_used, 3u);
  EXPECT_NEAR(deviation_relation_exponent(DiffusionMode::db0, 3), 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(deviation_relation_exponent(DiffusionMode::dc0, 2), 1.0 / 3.0, 1e-15);
}

TEST(GammaBound, FiniteConstant) {
  const double k = fit_gamma_bound_constant(1e-6, 1e3, 40);
  EXPECT_TRUE(std::isfinite(k));
  EXPECT_GE(k, 2.0);  // Gamma(x, x) = 2 on the diagonal
  EXPECT_THROW(fit_gamma_bound_constant(1.0, 0.5, 10), Error);
}
