#include "degrd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "degrd/error.hpp"

namespace degrd {

DomainSpec DomainSpec::box(std::vector<double> lengths) {
  if (lengths.empty() || lengths.size() > 3) {
    throw Error(ErrorCode::invalid_argument, "box dimension must be 1, 2 or 3");
  }
  double volume = 1.0;
  double longest = 0.0;
  for (double length : lengths) {
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw Error(ErrorCode::invalid_argument, "box lengths must be positive and finite");
    }
    volume *= length;
    longest = std::max(longest, length);
  }
  DomainSpec domain;
  domain.dimension = static_cast<int>(lengths.size());
  domain.lengths = std::move(lengths);
  domain.volume = volume;
  domain.poincare_constant = (longest / std::numbers::pi) * (longest / std::numbers::pi);
  return domain;
}

std::string_view to_string(DiffusionMode mode) noexcept {
  switch (mode) {
    case DiffusionMode::full: return "full";
    case DiffusionMode::db0: return "db0";
    case DiffusionMode::dc0: return "dc0";
  }
  return "full";
}

DiffusionMode parse_mode(std::string_view text) {
  if (text == "full") return DiffusionMode::full;
  if (text == "db0") return DiffusionMode::db0;
  if (text == "dc0") return DiffusionMode::dc0;
  throw Error(ErrorCode::invalid_argument, "unknown mode '" + std::string(text) + "'");
}

void ModelParams::validate() const {
  const bool finite = std::isfinite(d_a) && std::isfinite(d_b) && std::isfinite(d_c);
  if (!finite || d_a <= 0.0 || d_b < 0.0 || d_c < 0.0) {
    throw Error(ErrorCode::invalid_argument, "diffusivities must be finite, d_a > 0, d_b, d_c >= 0");
  }
  if (d_b == 0.0 && d_c == 0.0) {
    throw Error(ErrorCode::invalid_argument, "d_b and d_c cannot both vanish");
  }
}

DiffusionMode ModelParams::mode() const {
  if (d_b == 0.0) return DiffusionMode::db0;
  if (d_c == 0.0) return DiffusionMode::dc0;
  return DiffusionMode::full;
}

SpeciesFields SpeciesFields::uniform(std::size_t cells, double a, double b, double c) {
  return SpeciesFields{std::vector<double>(cells, a), std::vector<double>(cells, b),
                       std::vector<double>(cells, c)};
}

void check_finite(const SpeciesFields& fields) {
  const std::size_t n = fields.a.size();
  if (n == 0 || fields.b.size() != n || fields.c.size() != n) {
    throw Error(ErrorCode::invalid_field, "species arrays must be non-empty and of equal size");
  }
  for (const auto* u : {&fields.a, &fields.b, &fields.c}) {
    for (double v : *u) {
      if (!std::isfinite(v)) throw Error(ErrorCode::invalid_field, "non-finite concentration");
    }
  }
}

void check_positive(const SpeciesFields& fields) {
  check_finite(fields);
  for (const auto* u : {&fields.a, &fields.b, &fields.c}) {
    for (double v : *u) {
      if (!(v > 0.0)) throw Error(ErrorCode::not_positive, "concentrations must be strictly positive");
    }
  }
}

Masses conserved_masses(const SpeciesFields& fields, const DomainSpec& domain) {
  check_finite(fields);
  const double cell_volume = domain.volume / static_cast<double>(fields.size());
  double sum1 = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    sum1 += fields.a[i] + fields.c[i];
    sum2 += fields.b[i] + fields.c[i];
  }
  return {cell_volume * sum1 / domain.volume, cell_volume * sum2 / domain.volume};
}

RiccatiRoots riccati_roots(double m1, double m2) {
  const double s = 1.0 + m1 + m2;
  // s^2 - 4 m1 m2 rewritten without cancellation; strictly >= 1.
  const double disc = 1.0 + 2.0 * (m1 + m2) + (m1 - m2) * (m1 - m2);
  const double big = 0.5 * (s + std::sqrt(disc));
  // r1 = s/2 - sqrt(disc)/2 evaluated as m1 m2 / r2.
  return {m1 * m2 / big, big};
}

EquilibriumState equilibrium_state(double M1, double M2) {
  if (!(M1 >= 0.0) || !(M2 >= 0.0) || !std::isfinite(M1) || !std::isfinite(M2)) {
    throw Error(ErrorCode::invalid_mass, "masses must be finite and nonnegative");
  }
  const double c = riccati_roots(M1, M2).r1;
  // Clamp guards the last-ulp case c > M when one mass is tiny.
  return {std::max(M1 - c, 0.0), std::max(M2 - c, 0.0), c, M1, M2};
}

double gamma_ratio(double x, double y) {
  if (!(y > 0.0) || !std::isfinite(y)) throw Error(ErrorCode::invalid_argument, "gamma_ratio needs y > 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::invalid_argument, "gamma_ratio needs x >= 0");
  if (x == 0.0) return 1.0;
  const double sx = std::sqrt(x);
  const double sy = std::sqrt(y);
  if (std::abs(sx - sy) < 1e-7 * sy) {
    const double e = sx / sy - 1.0;
    return 2.0 + e * (2.0 / 3.0 - e / 6.0);
  }
  // With r = x / y = 1 + q: Gamma = h(q) (1 + sqrt r)^2 where
  // h(q) = ((1 + q) log1p(q) - q) / q^2 stays well conditioned as q -> 0.
  const double q = x / y - 1.0;
  double h;
  if (std::abs(q) < 1e-3) {
    h = 0.5 + q * (-1.0 / 6.0 + q * (1.0 / 12.0 + q * (-1.0 / 20.0 + q / 30.0)));
  } else {
    h = ((1.0 + q) * std::log1p(q) - q) / (q * q);
  }
  const double s = 1.0 + sx / sy;
  return h * s * s;
}

}  // namespace degrd
