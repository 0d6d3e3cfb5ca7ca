// Semi-discrete right-hand side of the velocity-stress system.
//
// Two schemes share the mortar flux computation:
//   Sfim  test and trial functions are both projected to the mortar and all
//         surface integrals use the mortar quadrature (energy stable);
//   Afim  the mortar flux is projected back to each element face and
//         integrated with the face rule.
#pragma once

#include "mortar_dg/geometry_metrics.hpp"
#include "mortar_dg/material_state.hpp"
#include "mortar_dg/mortar_projection.hpp"

#include <string>
#include <vector>

namespace mdg {

enum class Scheme { Sfim, Afim };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

// Velocities, tractions and impedances on both sides of one mortar point.
// Tractions on both sides use the mortar normal (minus-side outward).
struct PointTrace {
  Vec3 vm{}, vp{}, Tm{}, Tp{};
  double zpm = 1.0, zpp = 1.0, zsm = 1.0, zsp = 1.0;
};

struct FluxResult {
  Vec3 T{};
  Vec3 v{};
};

// Isotropic flux split into the normal and tangential parts; alpha = 1 is
// upwind, alpha = 0 central. Throws on nonpositive impedance.
FluxResult numerical_flux(const Vec3& n, const PointTrace& tr, double alpha);
// Traction-free boundary: T* = 0 and the velocity carries the upwind correction.
FluxResult boundary_flux(const Vec3& n, const Vec3& vm, const Vec3& Tm, double zp, double zs,
                         double alpha);

// Traces of a state on one mortar, at the mortar nodes (component-major).
struct MortarTrace {
  bool boundary = false;
  std::vector<double> vm, vp, Tm, Tp;      // 3 * nodes each
  std::vector<double> zpm, zpp, zsm, zsp;  // nodes each
};

class DgOperator {
 public:
  struct Options {
    Scheme scheme = Scheme::Sfim;
    double alpha = 1.0;
  };

  // All arguments must outlive the operator.
  DgOperator(const TensorOps3D& ops, const MortarSet& mortars, const MortarOperators& mops,
             const Geometry& geometry, const MaterialField& material, Options options);

  const Options& options() const { return opt_; }
  int num_elements() const { return E_; }
  int nodes() const { return nv_; }

  // dq = d/dt q under the configured scheme. Not safe for concurrent calls on
  // one operator (scratch buffers are shared).
  void rhs(const State& q, State& dq) const;
  void rhs_sfim(const State& q, State& dq) const;
  void rhs_afim(const State& q, State& dq) const;

  std::vector<MortarTrace> mortar_traces(const State& q) const;

  // v^T M_rho dv + sigma^T M_S dsigma.
  double energy_rate(const State& q, const State& dq) const;

  // Mortar impedance values that were clamped to stay positive.
  int clamped_impedances() const { return clamped_; }
  const Geometry& geometry() const { return geo_; }
  const MaterialField& material() const { return mat_; }

 private:
  void gather_face_traces(const State& q) const;
  void side_fields(int m, int side, double* v, double* s) const;
  void mortar_fluxes(bool afim) const;
  void element_update(const State& q, State& dq, bool afim) const;

  const TensorOps3D& ops_;
  const MortarSet& ms_;
  const MortarOperators& mops_;
  const Geometry& geo_;
  const MaterialField& mat_;
  Options opt_;
  int E_, nv_, nf_, M_;
  int clamped_ = 0;

  std::vector<double> jr_over_j_;  // [e][k][j][node]
  std::vector<double> inv_wj_;     // [e][node]
  std::vector<double> w_mortar_;   // [m][node]: face weight times S_J of the minus face
  std::vector<double> n_mortar_;   // [m][j][node]
  std::vector<double> z_;          // [m][side][zp, zs][node]

  mutable std::vector<double> trace_;  // [e][f][9][face node]
  mutable std::vector<double> flux_;   // [m][side][9][mortar node]
};

}  // namespace mdg
