#pragma once

// Reference solutions used to cross-check the solver and the functionals.
// Nothing here calls into the grid, solver or functionals implementations.

#include "degrd/functionals.hpp"
#include "degrd/grid.hpp"
#include "degrd/model.hpp"

namespace degrd::oracle {

struct OdeState {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double t = 0.0;
};

/// Classical RK4 for a' = b' = c - ab, c' = ab - c with step t_end/substeps.
/// Throws StepTooLarge if a component drops below -1e-12.
OdeState homogeneous_ode(double a0, double b0, double c0, double t_end, int substeps);

/// Closed-form solution of the same ODE at time t.
OdeState riccati_closed_form(double a0, double b0, double c0, double t);

/// Functionals by naive per-cell summation over explicit multi-indices.
/// Running integrals start fresh, so both integral diagnostics are zero.
FunctionalSample brute_force_sample(const SpeciesFields& fields, const EquilibriumState& eq,
                                    const ModelParams& params, const DomainSpec& domain, const Grid& grid);

}  // namespace degrd::oracle
