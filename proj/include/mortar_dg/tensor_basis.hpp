// One-dimensional Legendre-Gauss-Lobatto rules and the tensor-product
// operators built from them.
//
// Volume arrays hold (N+1)^3 nodal values with the first reference direction
// fastest: node (i, j, k) lives at i + (N+1) j + (N+1)^2 k. Face arrays hold
// (N+1)^2 values indexed by the two tangential directions in increasing
// order, again with the lower direction fastest.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace mdg {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct LglRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return order + 1; }
};

// Legendre polynomial P_n(x) and its derivative.
void legendre_eval(int n, double x, double& p, double& dp);
double legendre(int n, double x);

LglRule lgl_rule(int N);

// q-point Gauss-Legendre rule, exact for degree 2q-1.
void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w);

struct Basis1D {
  LglRule rule;
  Mat D;
  Mat DT;
  // (1 + xi_k) / 2 with exact mirror symmetry tau_{N-k} = 1 - tau_k, so
  // elements that traverse an axis in opposite senses place shared nodes at
  // bit-identical positions.
  std::vector<double> tau;

  int n() const { return rule.size(); }
};

Basis1D diff_matrix(const LglRule& rule);

// Lagrange interpolation from the src nodes to the dst points. A destination
// within 1e-14 of a source node takes that node's value exactly.
Mat interp_matrix(const std::vector<double>& src, const std::vector<double>& dst);

// Exact mass matrix of the Lagrange basis on the LGL nodes.
Mat exact_mass_matrix(const LglRule& rule);

// Nodal operator removing the degree-N Legendre mode (L2 projection onto
// polynomials of degree N-1).
Mat degree_drop_projection(const LglRule& rule);

// Modal (Legendre) coefficients of nodal data.
Mat modal_transform(const LglRule& rule);

class TensorOps3D {
 public:
  explicit TensorOps3D(int N);

  int order() const { return N_; }
  int n() const { return n_; }
  int volume_size() const { return n_ * n_ * n_; }
  int face_size() const { return n_ * n_; }
  const Basis1D& basis() const { return basis_; }
  const LglRule& rule() const { return basis_.rule; }

  // Volume indices of the nodes of local face f (0..5: r1=-1, r1=+1, r2=-1,
  // r2=+1, r3=-1, r3=+1), in face-array order.
  const std::vector<int>& face_nodes(int f) const { return face_nodes_[f]; }

  // Tensor-product quadrature weights on the volume and on a face.
  const std::vector<double>& volume_weights() const { return wvol_; }
  const std::vector<double>& face_weights() const { return wface_; }

  // out = A applied along reference direction dir (0, 1 or 2).
  void apply_axis(const Mat& A, const double* in, double* out, int dir,
                  bool accumulate = false) const;
  void derivative(const double* in, double* out, int dir, bool accumulate = false) const;
  void derivative_transpose(const double* in, double* out, int dir,
                            bool accumulate = false) const;

  // out = (ops[2] (x) ops[1] (x) ops[0]) in, where ops[d] acts along direction d.
  void apply_tensor(const std::array<const Mat*, 3>& ops, const double* in,
                    double* out) const;

  void restrict_to_face(int f, const double* vol, double* face) const;
  void add_from_face(int f, const double* face, double* vol) const;

 private:
  int N_;
  int n_;
  Basis1D basis_;
  std::array<std::vector<int>, 6> face_nodes_;
  std::vector<double> wvol_;
  std::vector<double> wface_;
};

// Local face f has normal direction f / 2 and lies at r = -1 (even f) or
// r = +1 (odd f). Its tangential directions are the remaining two, ascending.
inline int face_axis(int f) { return f / 2; }
inline int face_side(int f) { return f % 2; }
inline std::array<int, 2> face_tangents(int f) {
  int a = f / 2;
  return a == 0 ? std::array<int, 2>{1, 2}
                : (a == 1 ? std::array<int, 2>{0, 2} : std::array<int, 2>{0, 1});
}

}  // namespace mdg
