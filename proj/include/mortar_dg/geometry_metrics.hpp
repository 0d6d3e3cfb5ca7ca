// Physical geometry of the mesh: nodal coordinates, curl-form volume
// metrics and the surface metrics derived from them.
//
// Three treatments of nonconforming interfaces are supported:
//   interpolated       the transform sampled at every element's own nodes;
//   watertight         hanging faces and edges take the coordinates of the
//                      full face or edge they lie on;
//   continuous-metric  watertight, plus the zeta intermediates on hanging
//                      faces and edges are taken from the full side so that
//                      S_J n agrees across the interface.
#pragma once

#include "mortar_dg/mesh_topology.hpp"
#include "mortar_dg/mortar_projection.hpp"
#include "mortar_dg/tensor_basis.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace mdg {

enum class GeometryTreatment { Interpolated, Watertight, ContinuousMetric };

GeometryTreatment parse_treatment(const std::string& name);
std::string treatment_name(GeometryTreatment t);

using Vec3 = std::array<double, 3>;

// Maps unit-box coordinates s in [0, 1]^3 to physical space.
struct TransformSpec {
  enum class Kind { AffineBox, Skew, User };
  Kind kind = Kind::AffineBox;
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};
  // Linear part applied after scaling to [lo, hi] (affine box only).
  std::array<Vec3, 3> shear{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  // Peak rotation angle of the skew transform, reached at the centre.
  double amplitude = 0.7853981633974483;
  std::function<Vec3(const Vec3&)> user;

  static TransformSpec affine_box(const Vec3& lo, const Vec3& hi);
  // x = Q(beta) r on [-1, 1]^3 with beta = amplitude * prod_i (1 - r_i^2).
  static TransformSpec skew(double amplitude = 0.7853981633974483);

  Vec3 map(const Vec3& s) const;
  // Physical translation corresponding to one box period along axis g.
  Vec3 period(int g) const;
};

// The skew rotation matrix as a function of the angle.
std::array<Vec3, 3> skew_rotation(double beta);

struct Geometry {
  int order = 0;
  int n = 0;
  int nodes = 0;       // (N+1)^3
  int face_nodes = 0;  // (N+1)^2
  int num_elements = 0;
  GeometryTreatment treatment = GeometryTreatment::Interpolated;

  std::vector<double> x;     // [e][i][node]
  std::vector<double> zeta;  // [e][j][k][node]
  std::vector<double> Jr;    // [e][k][j][node]: J dr_k/dx_j
  std::vector<double> J;     // [e][node]
  std::vector<double> wJ;    // [e][node]: quadrature weight times J
  std::vector<double> wJr;   // [e][k][j][node]: quadrature weight times Jr
  std::vector<double> SJ;    // [e][f][face node]
  std::vector<double> normal;  // [e][f][j][face node]
  std::vector<double> metric_scale;  // [e]: max nodal |Jr|

  const double* coord(int e, int i) const { return &x[(static_cast<std::size_t>(e) * 3 + i) * nodes]; }
  const double* jr(int e, int k, int j) const {
    return &Jr[(static_cast<std::size_t>(e) * 9 + 3 * k + j) * nodes];
  }
  const double* zeta_of(int e, int j, int k) const {
    return &zeta[(static_cast<std::size_t>(e) * 9 + 3 * j + k) * nodes];
  }
  const double* sj(int e, int f) const {
    return &SJ[(static_cast<std::size_t>(e) * 6 + f) * face_nodes];
  }
  const double* n_of(int e, int f, int j) const {
    return &normal[((static_cast<std::size_t>(e) * 6 + f) * 3 + j) * face_nodes];
  }
  double volume() const;
};

// Full pipeline: sample, make watertight, zeta, zeta exchange, metrics.
Geometry build_geometry(const Mesh& mesh, const TensorOps3D& ops, const TransformSpec& spec,
                        GeometryTreatment treatment);

// Individual stages, exposed for testing.
std::vector<double> sample_transform(const Mesh& mesh, const TensorOps3D& ops,
                                     const TransformSpec& spec);
void make_watertight(const Mesh& mesh, const TensorOps3D& ops, const TransformSpec& spec,
                     std::vector<double>& x);
std::vector<double> compute_zeta(const TensorOps3D& ops, int num_elements,
                                 const std::vector<double>& x);
void make_zeta_consistent(const Mesh& mesh, const TensorOps3D& ops, const TransformSpec& spec,
                          const std::vector<double>& x, std::vector<double>& zeta);
// Fills Jr, J, wJ, wJr, SJ, normal and metric_scale from x and zeta.
void compute_metrics(const TensorOps3D& ops, Geometry& g);

// max over elements and nodes of |sum_k D_k (Jr_{k,j})| / metric_scale.
double freestream_residual(const TensorOps3D& ops, const Geometry& g);

// Largest coordinate mismatch between hanging-face nodes and the full face
// they lie on, measured at the hanging face's nodes.
double max_hanging_coordinate_jump(const Mesh& mesh, const TensorOps3D& ops,
                                   const TransformSpec& spec, const Geometry& g);

// max over e, j, nodes of |S_j^T 1 - sum_m P^T W^m n_j^{m[e]}| / metric_scale(e).
double discrete_divergence_residual(const TensorOps3D& ops, const Geometry& g,
                                    const MortarSet& mortars, const MortarOperators& mops);

// Evaluates nodal volume fields of one element at arbitrary reference points.
class PointEvaluator {
 public:
  PointEvaluator(const LglRule& rule, const std::vector<Vec3>& points);
  void eval(const double* field, double* out) const;
  int size() const { return static_cast<int>(rows_.size()); }

 private:
  int n_;
  std::vector<std::array<std::vector<double>, 3>> rows_;
};

}  // namespace mdg
