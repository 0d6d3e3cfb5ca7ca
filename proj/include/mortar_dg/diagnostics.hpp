// Analytic solutions, error norms and the conservation and constant-state
// measures used by the experiments.
#pragma once

#include "mortar_dg/geometry_metrics.hpp"
#include "mortar_dg/material_state.hpp"

#include <array>
#include <functional>

namespace mdg {

struct PointState {
  Vec3 v{0.0, 0.0, 0.0};
  Voigt sigma{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
};

using ExactSolution = std::function<PointState(const Vec3& x, double t)>;

double p_wave_speed(double rho, double lambda, double mu);
double s_wave_speed(double rho, double mu);

// Displacements u1 = cos(2 pi (c_p t + x1)), u2 = u3 = cos(2 pi (c_s t + x1));
// returns v = du/dt and sigma = lambda tr(grad u) I + mu (grad u + grad u^T).
PointState planewave_exact(const Vec3& x, double t, double rho, double lambda, double mu);

// Time derivative of planewave_exact.
PointState planewave_rate(const Vec3& x, double t, double rho, double lambda, double mu);

// The exact solution sampled at every node of the geometry.
State sample_solution(const Geometry& g, const ExactSolution& exact, double t);

// Energy norm sqrt(E(q - exact)) with the quadrature energy.
double l2_energy_error(const State& q, const ExactSolution& exact, const MaterialField& mat,
                       const Geometry& g);

// Per-component conservation errors |int (c - c0)| / |int c0|. Momentum
// components are rho v_i; strain components eps_ij = S_ijkl sigma_kl over all
// nine (i, j) pairs. A component whose initial integral vanishes is reported
// unnormalized and flagged.
struct ConservationError {
  std::array<double, 3> momentum{};
  std::array<double, 9> strain{};  // row-major (i, j)
  std::array<bool, 12> unnormalized{};

  double momentum_sum() const;
  double strain_sum() const;
  double total() const { return momentum_sum() + strain_sum(); }
};

ConservationError conservation_error(const State& q, const State& q0, const MaterialField& mat,
                                     const Geometry& g);

// sqrt(E(q - q0) / E(q0)).
double normalized_drift(const State& q, const State& q0, const MaterialField& mat,
                        const std::vector<double>& wJ);

// v = (1, 2, 3), sigma11 = 4, sigma12 = 5, sigma13 = 6, sigma22 = 7,
// sigma23 = 8, sigma33 = 9 at every node.
State constant_state(int num_elements, int nodes);

// Corner-to-corner length of [-1, 1]^3 over the slowest shear speed sqrt(20).
double reference_time();

// log2(err_coarse / err_fine) for one bisection.
double convergence_rate(double err_coarse, double err_fine);

}  // namespace mdg
