#include "degrd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "degrd/error.hpp"

namespace degrd {

Grid::Grid(const DomainSpec& domain, std::vector<int> cells_per_axis) : cells_(std::move(cells_per_axis)) {
  if (static_cast<int>(cells_.size()) != domain.dimension ||
      domain.lengths.size() != cells_.size()) {
    throw Error(ErrorCode::invalid_argument, "cells per axis must match the domain dimension");
  }
  size_ = 1;
  cell_volume_ = 1.0;
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    if (cells_[k] < 1) throw Error(ErrorCode::invalid_argument, "cells per axis must be positive");
    spacing_.push_back(domain.lengths[k] / cells_[k]);
    size_ *= static_cast<std::size_t>(cells_[k]);
    cell_volume_ *= spacing_.back();
  }
  stride_.assign(cells_.size(), 1);
  for (int k = static_cast<int>(cells_.size()) - 2; k >= 0; --k) {
    stride_[k] = stride_[k + 1] * static_cast<std::size_t>(cells_[k + 1]);
  }
}

double Grid::center(std::size_t index, int axis) const {
  const auto i = (index / stride_.at(axis)) % static_cast<std::size_t>(cells_.at(axis));
  return (static_cast<double>(i) + 0.5) * spacing_[axis];
}

namespace {

void check_size(std::span<const double> u, const Grid& grid) {
  if (u.size() != grid.size()) throw Error(ErrorCode::invalid_argument, "array size does not match grid");
}

// Calls visit(left, right, weight) for every interior face, weight = 1/h^2.
template <typename Visit>
void for_each_face(const Grid& grid, Visit&& visit) {
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const std::size_t stride = grid.stride(axis);
    const auto n = static_cast<std::size_t>(grid.cells(axis));
    const double weight = 1.0 / (grid.spacing(axis) * grid.spacing(axis));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if ((i / stride) % n + 1 < n) visit(i, i + stride, weight);
    }
  }
}

}  // namespace

std::vector<double> laplacian_neumann(std::span<const double> u, const Grid& grid) {
  check_size(u, grid);
  std::vector<double> out(u.size(), 0.0);
  for_each_face(grid, [&](std::size_t l, std::size_t r, double w) {
    const double flux = w * (u[r] - u[l]);
    out[l] += flux;
    out[r] -= flux;
  });
  return out;
}

double integrate(std::span<const double> u, const Grid& grid) {
  check_size(u, grid);
  double sum = 0.0;
  for (double v : u) sum += v;
  return grid.cell_volume() * sum;
}

double inner_product(std::span<const double> u, std::span<const double> v, const Grid& grid) {
  check_size(u, grid);
  check_size(v, grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return grid.cell_volume() * sum;
}

double lp_norm(std::span<const double> u, double p, const Grid& grid) {
  check_size(u, grid);
  if (std::isnan(p) || p < 1.0) throw Error(ErrorCode::invalid_exponent, "norm exponent must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : u) sum += std::abs(v);
    return grid.cell_volume() * sum;
  }
  if (p == 2.0) {
    for (double v : u) sum += v * v;
    return std::sqrt(grid.cell_volume() * sum);
  }
  for (double v : u) sum += std::pow(std::abs(v), p);
  return std::pow(grid.cell_volume() * sum, 1.0 / p);
}

double dirichlet_energy(std::span<const double> u, const Grid& grid) {
  check_size(u, grid);
  double sum = 0.0;
  for_each_face(grid, [&](std::size_t l, std::size_t r, double w) {
    const double jump = u[r] - u[l];
    sum += w * jump * jump;
  });
  return grid.cell_volume() * sum;
}

double sqrt_gradient_energy(std::span<const double> u, const Grid& grid) {
  check_size(u, grid);
  std::vector<double> root(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0)) throw Error(ErrorCode::not_positive, "sqrt_gradient_energy needs positive entries");
    root[i] = std::sqrt(u[i]);
  }
  return dirichlet_energy(root, grid);
}

double deviation_l2(std::span<const double> u, const Grid& grid) {
  check_size(u, grid);
  double sum = 0.0;
  for (double v : u) sum += v;
  const double mean = sum / static_cast<double>(u.size());
  double dev = 0.0;
  for (double v : u) dev += (v - mean) * (v - mean);
  return std::sqrt(grid.cell_volume() * dev);
}

double smallest_neumann_eigenvalue(const Grid& grid) {
  double lambda = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    if (grid.cells(axis) < 2) continue;
    const double h = grid.spacing(axis);
    const double s = std::sin(std::numbers::pi * h / (2.0 * grid.length(axis)));
    lambda = std::min(lambda, 4.0 * s * s / (h * h));
  }
  return lambda;
}

}  // namespace degrd
