// Isotropic materials, the solution state and the discrete energy.
//
// Symmetric tensors are stored in Voigt order (11, 22, 33, 23, 13, 12) with
// tensor (not engineering) off-diagonal components.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mdg {

using Voigt = std::array<double, 6>;

// Strain from stress for an isotropic material.
Voigt compliance_apply(double lambda, double mu, const Voigt& sigma);
// Stress from strain.
Voigt stiffness_apply(double lambda, double mu, const Voigt& eps);
// a : b for symmetric tensors in Voigt storage.
double voigt_contract(const Voigt& a, const Voigt& b);

struct MaterialRanges {
  std::array<double, 2> rho{1.0, 3.0};
  std::array<double, 2> mu{20.0, 40.0};
  std::array<double, 2> lambda{30.0, 60.0};
};

struct MaterialField {
  int num_elements = 0;
  int nodes = 0;
  std::vector<double> rho, lambda, mu;
  // Derived nodal quantities.
  std::vector<double> cp, cs, zp, zs;

  static MaterialField uniform(int num_elements, int nodes, double rho, double lambda, double mu);
  static MaterialField random(int num_elements, int nodes, std::uint64_t seed,
                              const MaterialRanges& ranges = {});

  // Validates positivity (rho > 0, mu > 0, lambda + 2 mu / 3 > 0) and fills
  // the derived fields. Throws std::invalid_argument on violation.
  void finalize();
  double max_cp() const;
  double min_cs() const;
};

// Nodal velocities and stresses. Element e holds 9 consecutive blocks of
// `nodes` values: v1, v2, v3, then the stress in Voigt order.
struct State {
  static constexpr int kFields = 9;
  int num_elements = 0;
  int nodes = 0;
  double t = 0.0;
  std::vector<double> data;

  State() = default;
  State(int num_elements, int nodes)
      : num_elements(num_elements), nodes(nodes),
        data(static_cast<std::size_t>(num_elements) * kFields * nodes, 0.0) {}

  std::size_t element_stride() const { return static_cast<std::size_t>(kFields) * nodes; }
  double* field(int e, int c) { return data.data() + e * element_stride() + c * nodes; }
  const double* field(int e, int c) const {
    return data.data() + e * element_stride() + c * nodes;
  }
  bool finite() const;
};

// 1/2 sum of wJ (rho v.v + sigma : S : sigma) over all nodes, where wJ holds
// quadrature weight times Jacobian per node (element-major).
double discrete_energy(const State& q, const MaterialField& mat, const std::vector<double>& wJ);

// Energy inner product <a, b>: the bilinear form whose diagonal is twice the
// discrete energy.
double energy_inner(const State& a, const State& b, const MaterialField& mat,
                    const std::vector<double>& wJ);

// Uniform [lo, hi) entries drawn from the counter-based generator.
State random_state(int num_elements, int nodes, std::uint64_t seed, double lo = -1.0,
                   double hi = 1.0);

}  // namespace mdg
