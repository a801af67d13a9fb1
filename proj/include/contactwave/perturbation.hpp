#pragma once

#include "contactwave/flow.hpp"
#include "contactwave/profile.hpp"

namespace cw {

/// Difference between the full flow and the wave profile:
/// phi = v - V, psi = u - U, zeta = theta - Theta.
struct Perturbation {
  double t = 0.0;
  Array phi, psi, zeta;
};

/// Componentwise subtraction; throws TimeMismatch when the stamps differ by
/// more than dt_tol.
Perturbation perturbation_of(const FlowField& state, const ProfileField& profile,
                             double dt_tol = 1e-9);

FlowField reconstruct(const Perturbation& pert, const ProfileField& profile);

/// Discrete residual of the three perturbation equations, evaluated at the
/// midpoint of two consecutive snapshots (time derivative by the centered
/// difference across the pair, spatial terms from the averaged fields).
/// The L2 norm is taken over |x| <= interior_fraction * L to keep the
/// one-sided boundary closures out of convergence measurements.
struct ResidualTriple {
  Array r_mass, r_momentum, r_energy;
  double l2 = 0.0;  // sqrt of the summed interior squared L2 norms
};
ResidualTriple perturbation_residual(const Perturbation& early, const Perturbation& late,
                                     const ProfileField& prof_early, const ProfileField& prof_late,
                                     const PhysParams& p, const Grid& grid,
                                     double interior_fraction = 0.9);

}  // namespace cw
