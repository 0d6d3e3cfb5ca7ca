// Transfer operators between element faces and mortars.
//
// A mortar carries the LGL nodes of its minus face. Each side of a mortar is
// described by two one-dimensional operators, one per face tangential axis,
// so every transfer costs two small contractions.
#pragma once

#include "mortar_dg/mesh_topology.hpp"
#include "mortar_dg/tensor_basis.hpp"

#include <array>
#include <vector>

namespace mdg {

struct HalfOps1D {
  // Interpolation to the LGL nodes mapped into [-1, 0] (b) and [0, 1] (t).
  Mat Ib, It;
  // L2 projections of a polynomial on one half onto the whole interval.
  Mat Pb, Pt;
  // Exact mass matrix on [-1, 1].
  Mat M;
};

HalfOps1D build_half_ops(int N);

// One-dimensional factors of a side's transfer operator.
//   to_mortar: face values along face axis t -> mortar values along axis
//              mortar_axis[t] (n x n). Interpolation or projection.
//   to_face:   the reverse direction, used when mortar fluxes are brought
//              back to the element face.
struct SideOps {
  FaceRef ref;
  bool identity = false;
  std::array<int, 2> mortar_axis{0, 1};
  std::array<Mat, 2> to_mortar;
  std::array<Mat, 2> to_face;
};

class MortarOperators {
 public:
  MortarOperators(const TensorOps3D& ops, const MortarSet& mortars);

  int n() const { return n_; }
  const HalfOps1D& half() const { return half_; }
  // side = -1 for the minus side, i for plus[i].
  const SideOps& side(int m, int s) const;

  // mortar (+)= P face.
  void to_mortar(int m, int s, const double* face, double* mortar, bool accumulate = false) const;
  // face (+)= P^T mortar.
  void transpose(int m, int s, const double* mortar, double* face, bool accumulate = false) const;
  // face (+)= back-transfer of mortar data onto the face space.
  void to_face(int m, int s, const double* mortar, double* face, bool accumulate = false) const;

  // Dense (n^2 x n^2) matrix of to_mortar, for checks.
  Mat dense(int m, int s) const;

 private:
  int n_;
  HalfOps1D half_;
  std::vector<SideOps> minus_;
  std::vector<std::vector<SideOps>> plus_;
};

// One-dimensional operators for a face axis related to a mortar axis by
// face coordinate = c1 * mortar coordinate + c0.
Mat face_to_mortar_1d(const LglRule& rule, const HalfOps1D& half, double c1, double c0);
Mat mortar_to_face_1d(const LglRule& rule, const HalfOps1D& half, double c1, double c0);

}  // namespace mdg
