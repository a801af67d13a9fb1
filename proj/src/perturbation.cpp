#include "contactwave/perturbation.hpp"

#include <cmath>

#include "contactwave/errors.hpp"

namespace cw {

Perturbation perturbation_of(const FlowField& state, const ProfileField& profile, double dt_tol) {
  if (std::abs(state.t - profile.t) > dt_tol)
    throw TimeMismatch("perturbation_of: state at t=" + std::to_string(state.t) +
                       " vs profile at t=" + std::to_string(profile.t));
  Perturbation pert;
  pert.t = state.t;
  pert.phi = state.v - profile.V;
  pert.psi = state.u - profile.U;
  pert.zeta = state.theta - profile.Theta;
  return pert;
}

FlowField reconstruct(const Perturbation& pert, const ProfileField& profile) {
  FlowField s;
  s.t = pert.t;
  s.v = profile.V + pert.phi;
  s.u = profile.U + pert.psi;
  s.theta = profile.Theta + pert.zeta;
  return s;
}

ResidualTriple perturbation_residual(const Perturbation& early, const Perturbation& late,
                                     const ProfileField& prof_early, const ProfileField& prof_late,
                                     const PhysParams& p, const Grid& grid,
                                     double interior_fraction) {
  const double dt = late.t - early.t;
  if (!(dt > 0.0)) throw std::invalid_argument("perturbation_residual: need increasing times");
  const double dx = grid.dx();

  // midpoint fields
  const Array phi = 0.5 * (early.phi + late.phi);
  const Array psi = 0.5 * (early.psi + late.psi);
  const Array zeta = 0.5 * (early.zeta + late.zeta);
  const Array V = 0.5 * (prof_early.V + prof_late.V);
  const Array U = 0.5 * (prof_early.U + prof_late.U);
  const Array Theta = 0.5 * (prof_early.Theta + prof_late.Theta);
  const Array Theta_x = 0.5 * (prof_early.Theta_x + prof_late.Theta_x);
  const Array U_x = 0.5 * (prof_early.U_x + prof_late.U_x);
  const Array F = 0.5 * (prof_early.F + prof_late.F);
  const Array G = 0.5 * (prof_early.G + prof_late.G);

  const Array v = V + phi;
  const Array u = U + psi;
  const Array theta = Theta + zeta;

  const Array phi_t = (late.phi - early.phi) / dt;
  const Array psi_t = (late.psi - early.psi) / dt;
  const Array zeta_t = (late.zeta - early.zeta) / dt;

  const Array psi_x = d1(psi, dx);
  const Array u_x = d1(u, dx);
  const double p_plus = p.p_plus();

  ResidualTriple out;
  out.r_mass = phi_t - psi_x;
  out.r_momentum = psi_t - d1(p.R * Theta / (v * V) * phi, dx) + d1(p.R * zeta / v, dx) +
                   p.mu * d1(U_x / (v * V) * phi, dx) - p.mu * d1(psi_x / v, dx) + F;
  out.r_energy = p.Cv() * zeta_t + (p.R * theta / v) * (psi_x + U_x) - p_plus * U_x -
                 p.kappa * d1(d1(zeta, dx) / v, dx) + p.kappa * d1(Theta_x * phi / (v * V), dx) -
                 p.mu * (u_x.square() / v - U_x.square() / V) + G;

  const double cut = interior_fraction * grid.half_width;
  double acc = 0.0;
  long count = 0;
  for (int j = 0; j < grid.n; ++j) {
    if (std::abs(grid.x(j)) > cut) continue;
    acc += (out.r_mass(j) * out.r_mass(j) + out.r_momentum(j) * out.r_momentum(j) +
            out.r_energy(j) * out.r_energy(j)) *
           dx;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("perturbation_residual: empty interior window");
  out.l2 = std::sqrt(acc);
  return out;
}

}  // namespace cw
