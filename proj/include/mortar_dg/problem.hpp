// One assembled discretization: mesh, mortars, geometry, material and the
// right-hand-side operator, owned together so references stay valid.
#pragma once

#include "mortar_dg/dg_operator.hpp"

#include <memory>

namespace mdg {

struct MaterialSpec {
  bool random = false;
  double rho = 1.0, lambda = 1.0, mu = 1.0;
  std::uint64_t seed = 0;
  MaterialRanges ranges;

  static MaterialSpec uniform(double rho, double lambda, double mu);
  static MaterialSpec random_field(std::uint64_t seed, const MaterialRanges& ranges = {});
};

struct ProblemSpec {
  MeshSpec mesh;
  int order = 3;
  TransformSpec transform;
  GeometryTreatment treatment = GeometryTreatment::ContinuousMetric;
  MortarKind mortar_kind = MortarKind::FullSide;
  MaterialSpec material;
  Scheme scheme = Scheme::Sfim;
  double alpha = 1.0;
};

class Problem {
 public:
  explicit Problem(const ProblemSpec& spec);
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  const ProblemSpec& spec() const { return spec_; }
  const TensorOps3D& ops() const { return *ops_; }
  const Mesh& mesh() const { return *mesh_; }
  const MortarSet& mortars() const { return *mortars_; }
  const MortarOperators& mortar_ops() const { return *mops_; }
  const Geometry& geometry() const { return *geo_; }
  const MaterialField& material() const { return *mat_; }
  const DgOperator& op() const { return *op_; }

  State make_state() const { return State(mesh_->num_elements(), ops_->volume_size()); }
  double energy(const State& q) const { return discrete_energy(q, *mat_, geo_->wJ); }

 private:
  ProblemSpec spec_;
  std::unique_ptr<TensorOps3D> ops_;
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<MortarSet> mortars_;
  std::unique_ptr<MortarOperators> mops_;
  std::unique_ptr<Geometry> geo_;
  std::unique_ptr<MaterialField> mat_;
  std::unique_ptr<DgOperator> op_;
};

}  // namespace mdg
