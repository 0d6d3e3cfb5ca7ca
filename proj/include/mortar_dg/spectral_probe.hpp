// Growth-rate bounds from the energy-symmetrized operator.
//
// For dq/dt = A q with energy inner product <a, b>_M, the symmetric part
// H = (A + A*) / 2 (A* the M-adjoint) has Rayleigh quotient
// <q, A q>_M / <q, q>_M = dE/dt / (2 E). Its largest eigenvalue bounds the
// real part of every eigenvalue of A from above.
#pragma once

#include "mortar_dg/dg_operator.hpp"

#include <Eigen/Sparse>

#include <cstdint>

namespace mdg {

// Column-by-column assembly of q -> rhs(q). One operator application per
// degree of freedom, so only meant for small meshes.
Eigen::SparseMatrix<double> assemble_operator(const DgOperator& op, int num_elements, int nodes,
                                              double drop_tol = 0.0);

// y = M q and y = M^{-1} q for the energy mass matrix (diagonal in velocity,
// nodal 6x6 compliance blocks in stress).
void apply_energy_mass(const State& q, State& y, const MaterialField& mat,
                       const std::vector<double>& wJ);
void apply_inverse_energy_mass(const State& q, State& y, const MaterialField& mat,
                               const std::vector<double>& wJ);

struct GrowthBound {
  double max_rate = 0.0;  // largest Ritz value of H
  double min_rate = 0.0;  // smallest Ritz value of H
  int iterations = 0;
  State witness;          // Ritz vector of max_rate, unit energy norm
  double witness_rate = 0.0;  // <w, A w>_M / <w, w>_M evaluated through the operator
};

// Lanczos with full reorthogonalization in the M inner product.
GrowthBound symmetrized_growth(const DgOperator& op, const Eigen::SparseMatrix<double>& A,
                               int num_elements, int nodes, std::uint64_t seed,
                               int max_iterations = 300, double tol = 1e-10);

}  // namespace mdg
