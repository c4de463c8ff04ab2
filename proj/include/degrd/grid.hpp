#pragma once

// Cell-centred finite-volume discretisation of a box with uniform spacing
// per axis. Cells are stored row-major: the last axis varies fastest.

#include <cstddef>
#include <span>
#include <vector>

#include "degrd/model.hpp"

namespace degrd {

class Grid {
 public:
  Grid(const DomainSpec& domain, std::vector<int> cells_per_axis);

  int dimension() const noexcept { return static_cast<int>(cells_.size()); }
  std::size_t size() const noexcept { return size_; }
  const std::vector<int>& cells() const noexcept { return cells_; }
  int cells(int axis) const { return cells_.at(axis); }
  double spacing(int axis) const { return spacing_.at(axis); }
  double length(int axis) const { return spacing_.at(axis) * cells_.at(axis); }
  double cell_volume() const noexcept { return cell_volume_; }
  double volume() const noexcept { return cell_volume_ * static_cast<double>(size_); }
  /// Index distance between neighbours along an axis.
  std::size_t stride(int axis) const { return stride_.at(axis); }
  /// Position of the cell centre along an axis.
  double center(std::size_t index, int axis) const;

 private:
  std::vector<int> cells_;
  std::vector<double> spacing_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

/// Flux-form Neumann Laplacian: sum over faces of (neighbour - self) / h^2,
/// boundary faces carry zero flux.
std::vector<double> laplacian_neumann(std::span<const double> u, const Grid& grid);

/// Midpoint quadrature, cell_volume * sum(u).
double integrate(std::span<const double> u, const Grid& grid);

/// Volume-weighted inner product.
double inner_product(std::span<const double> u, std::span<const double> v, const Grid& grid);

/// (cell_volume * sum |u|^p)^(1/p); max |u| for p = infinity.
double lp_norm(std::span<const double> u, double p, const Grid& grid);

/// Face Dirichlet energy sum_faces (face_area / h) (u_R - u_L)^2, which is
/// -<laplacian(u), u> and the discrete analogue of int |grad u|^2.
double dirichlet_energy(std::span<const double> u, const Grid& grid);

/// Dirichlet energy of sqrt(u), the discrete int |grad sqrt(u)|^2.
double sqrt_gradient_energy(std::span<const double> u, const Grid& grid);

/// ||u - mean(u)||_{L2}.
double deviation_l2(std::span<const double> u, const Grid& grid);

/// Smallest nonzero eigenvalue of -laplacian_neumann on this grid,
/// min over axes of (4 / h^2) sin^2(pi h / (2 L)).
double smallest_neumann_eigenvalue(const Grid& grid);

}  // namespace degrd
