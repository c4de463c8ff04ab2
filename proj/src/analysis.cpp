#include "degrd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degrd/error.hpp"

namespace degrd {

namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  // Shift by the first point so constant data gives an exactly zero slope.
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i] - x[0];
    my += y[i] - y[0];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - x[0] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - y[0] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = y[0] + my - fit.slope * (x[0] + mx);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - y[0] - my - fit.slope * (x[i] - x[0] - mx);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

}  // namespace

DecayFit fit_subexponential(std::span<const double> times, std::span<const double> e_rel) {
  if (times.size() != e_rel.size()) throw Error(ErrorCode::invalid_argument, "times and values differ in length");
  std::vector<double> t;
  std::vector<double> log_e;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (e_rel[i] > kEntropyFloor && std::isfinite(e_rel[i])) {
      t.push_back(times[i]);
      log_e.push_back(std::log(e_rel[i]));
    }
  }
  if (t.empty()) throw Error(ErrorCode::already_converged, "every sample is below the entropy floor");
  if (t.size() < 10) throw Error(ErrorCode::invalid_argument, "envelope fit needs at least 10 samples above the floor");

  DecayFit best;
  double best_rms = std::numeric_limits<double>::infinity();
  std::vector<double> x(t.size());
  for (int k = 5; k <= 150; ++k) {
    const double alpha = k / 100.0;
    for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::pow(1.0 + t[i], alpha);
    const LineFit line = least_squares(x, log_e);
    const double s2 = -line.slope;
    if (!(s2 > 0.0) || !(line.rms < best_rms)) continue;
    best_rms = line.rms;
    best.alpha = alpha;
    best.S2 = s2;
    best.rms_residual = line.rms;
  }
  if (!std::isfinite(best_rms)) throw Error(ErrorCode::non_decaying, "no exponent gives a decaying envelope");

  double log_s1 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    log_s1 = std::max(log_s1, log_e[i] + best.S2 * std::pow(1.0 + t[i], best.alpha));
  }
  best.S1 = std::exp(log_s1);
  best.envelope_holds = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double bound = best.S1 * std::exp(-best.S2 * std::pow(1.0 + t[i], best.alpha));
    if (std::exp(log_e[i]) > bound * (1.0 + 1e-9)) best.envelope_holds = false;
  }
  best.t_first = t.front();
  best.t_last = t.back();
  best.samples_used = t.size();
  return best;
}

double theoretical_alpha(DiffusionMode mode, int dimension) {
  if (dimension < 1) throw Error(ErrorCode::invalid_argument, "dimension must be positive");
  switch (mode) {
    case DiffusionMode::full:
      return kExponentialAlphaTarget;
    case DiffusionMode::db0:
      return dimension >= 4 ? (1.0 - kTheoremEpsilon) / (dimension - 1) : (1.0 - kTheoremEpsilon) / 6.0;
    case DiffusionMode::dc0:
      if (dimension >= 4) throw Error(ErrorCode::unsupported, "no decay theorem for d_c = 0 with N >= 4");
      return (2.0 - kTheoremEpsilon) / 3.0;
  }
  return 0.0;
}

EnvelopeCheck check_theorem_envelope(const DecayFit& fit, DiffusionMode mode, int dimension) {
  EnvelopeCheck check;
  check.theoretical_alpha = theoretical_alpha(mode, dimension);
  check.fitted_alpha = fit.alpha;
  check.envelope_holds = fit.envelope_holds;
  check.reported_only = mode == DiffusionMode::db0 && dimension >= 4;
  // One-sided: faster-than-envelope decay passes.
  check.pass = fit.alpha >= check.theoretical_alpha - 1e-12 && fit.envelope_holds;
  return check;
}

BalanceAudit entropy_balance_audit(std::span<const double> times, std::span<const double> e_rel,
                                   std::span<const double> dissipation) {
  const std::size_t n = times.size();
  if (e_rel.size() != n || dissipation.size() != n) {
    throw Error(ErrorCode::invalid_argument, "series lengths differ");
  }
  if (n < 3) throw Error(ErrorCode::invalid_sampling, "entropy balance audit needs at least 3 samples");
  const double spacing = times[1] - times[0];
  if (!(spacing > 0.0)) throw Error(ErrorCode::invalid_sampling, "sample times must increase");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(times[i] - times[i - 1] - spacing) > 1e-9 * spacing) {
      throw Error(ErrorCode::invalid_sampling, "sample times are not uniformly spaced");
    }
  }
  BalanceAudit audit;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double rate = (e_rel[i + 1] - e_rel[i - 1]) / (times[i + 1] - times[i - 1]);
    const double residual = std::abs(rate + dissipation[i]) / std::max(dissipation[i], 1e-14);
    if (residual > audit.max_relative_residual) {
      audit.max_relative_residual = residual;
      audit.worst_time = times[i];
    }
  }
  return audit;
}

BalanceAudit entropy_balance_audit(std::span<const FunctionalSample> samples) {
  std::vector<double> t, e, d;
  for (const auto& s : samples) {
    t.push_back(s.t);
    e.push_back(s.E_rel);
    d.push_back(s.D);
  }
  return entropy_balance_audit(t, e, d);
}

GrowthDiagnostic fit_growth(const std::string& label, std::span<const double> times,
                            std::span<const double> values, double exponent) {
  if (times.size() != values.size() || times.empty()) {
    throw Error(ErrorCode::invalid_argument, "growth fit needs matching, non-empty series");
  }
  GrowthDiagnostic g{label, exponent, -std::numeric_limits<double>::infinity(), times[0]};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double ratio = values[i] / std::pow(1.0 + times[i], exponent);
    if (ratio > g.fitted_constant) {
      g.fitted_constant = ratio;
      g.max_ratio_time = times[i];
    }
  }
  return g;
}

std::vector<GrowthDiagnostic> growth_diagnostics(std::span<const FunctionalSample> samples, DiffusionMode mode,
                                                 int dimension) {
  struct Target {
    const char* label;
    double exponent;
  };
  std::vector<Target> targets;
  switch (mode) {
    case DiffusionMode::full:
      break;
    case DiffusionMode::db0:
      if (dimension <= 3) targets.push_back({diag::b_l32, 5.0 / 6.0});
      // (N-2)/(N-1) is undefined for N = 1.
      if (dimension >= 2) targets.push_back({diag::b_lN2, (dimension - 2.0) / (dimension - 1.0)});
      break;
    case DiffusionMode::dc0:
      if (dimension >= 4) throw Error(ErrorCode::unsupported, "growth bounds for d_c = 0 need N <= 3");
      targets.push_back({diag::a_l32, 1.0 / 3.0});
      targets.push_back({diag::b_l32, 1.0 / 3.0});
      targets.push_back({diag::c_l3, 1.0});
      targets.push_back({diag::int_a2ac, 1.0});
      targets.push_back({diag::int_b2bc, 1.0});
      break;
  }
  std::vector<GrowthDiagnostic> out;
  for (const Target& target : targets) {
    std::vector<double> t, v;
    for (const auto& s : samples) {
      const auto it = s.diag_norms.find(target.label);
      if (it == s.diag_norms.end()) {
        throw Error(ErrorCode::missing_diagnostic, std::string("sample lacks ") + target.label);
      }
      t.push_back(s.t);
      v.push_back(it->second);
    }
    out.push_back(fit_growth(target.label, t, v, target.exponent));
  }
  return out;
}

double deviation_relation_exponent(DiffusionMode mode, int dimension) {
  switch (mode) {
    case DiffusionMode::full: return 0.0;
    case DiffusionMode::db0: return dimension >= 4 ? (dimension - 2.0) / (dimension - 1.0) : 5.0 / 6.0;
    case DiffusionMode::dc0: return 1.0 / 3.0;
  }
  return 0.0;
}

DeviationRelation fit_deviation_relation(std::span<const FunctionalSample> samples, double beta) {
  DeviationRelation rel;
  rel.beta = beta;
  rel.constant = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double dev = s.dev_A2 + s.dev_B2 + s.dev_C2;
    if (!(dev > 1e-24)) continue;
    const double k = s.D * std::pow(1.0 + s.t, beta) / dev;
    ++rel.samples_used;
    if (k < rel.constant) {
      rel.constant = k;
      rel.binding_time = s.t;
    }
  }
  return rel;
}

double fit_gamma_bound_constant(double lo, double hi, int points_per_axis) {
  if (!(lo > 0.0) || !(hi > lo) || points_per_axis < 2) {
    throw Error(ErrorCode::invalid_argument, "gamma bound grid needs 0 < lo < hi and >= 2 points");
  }
  const double step = std::log(hi / lo) / (points_per_axis - 1);
  double worst = 0.0;
  for (int i = 0; i < points_per_axis; ++i) {
    const double x = lo * std::exp(step * i);
    for (int j = 0; j < points_per_axis; ++j) {
      const double y = lo * std::exp(step * j);
      worst = std::max(worst, gamma_ratio(x, y) / std::max(1.0, std::log(x / y)));
    }
  }
  return worst;
}

}  // namespace degrd
