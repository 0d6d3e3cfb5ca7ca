#include "mortar_dg/problem.hpp"

namespace mdg {

MaterialSpec MaterialSpec::uniform(double rho, double lambda, double mu) {
  MaterialSpec m;
  m.rho = rho;
  m.lambda = lambda;
  m.mu = mu;
  return m;
}

MaterialSpec MaterialSpec::random_field(std::uint64_t seed, const MaterialRanges& ranges) {
  MaterialSpec m;
  m.random = true;
  m.seed = seed;
  m.ranges = ranges;
  return m;
}

Problem::Problem(const ProblemSpec& spec) : spec_(spec) {
  ops_ = std::make_unique<TensorOps3D>(spec.order);
  mesh_ = std::make_unique<Mesh>(build_adapted_box(spec.mesh));
  mortars_ = std::make_unique<MortarSet>(build_mortars(*mesh_, spec.mortar_kind));
  mops_ = std::make_unique<MortarOperators>(*ops_, *mortars_);
  geo_ = std::make_unique<Geometry>(build_geometry(*mesh_, *ops_, spec.transform, spec.treatment));
  const int E = mesh_->num_elements(), nv = ops_->volume_size();
  mat_ = std::make_unique<MaterialField>(
      spec.material.random
          ? MaterialField::random(E, nv, spec.material.seed, spec.material.ranges)
          : MaterialField::uniform(E, nv, spec.material.rho, spec.material.lambda, spec.material.mu));
  op_ = std::make_unique<DgOperator>(*ops_, *mortars_, *mops_, *geo_, *mat_,
                                     DgOperator::Options{spec.scheme, spec.alpha});
}

}  // namespace mdg
