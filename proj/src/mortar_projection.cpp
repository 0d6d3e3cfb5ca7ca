#include "mortar_dg/mortar_projection.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace mdg {

HalfOps1D build_half_ops(int N) {
  const LglRule rule = lgl_rule(N);
  const int n = rule.size();
  std::vector<double> bottom(n), top(n);
  for (int i = 0; i < n; ++i) {
    bottom[i] = 0.5 * (rule.nodes[i] - 1.0);
    top[i] = 0.5 * (rule.nodes[i] + 1.0);
  }
  HalfOps1D h;
  h.M = exact_mass_matrix(rule);
  h.Ib = interp_matrix(rule.nodes, bottom);
  h.It = interp_matrix(rule.nodes, top);
  const Mat Minv = h.M.inverse();
  h.Pb = 0.5 * Minv * h.Ib.transpose() * h.M;
  h.Pt = 0.5 * Minv * h.It.transpose() * h.M;
  return h;
}

namespace {

Mat reversal(int n) {
  Mat F = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) F(i, n - 1 - i) = 1.0;
  return F;
}

Mat interpolate_affine(const LglRule& rule, double c1, double c0) {
  std::vector<double> pts(rule.size());
  for (int i = 0; i < rule.size(); ++i) pts[i] = c1 * rule.nodes[i] + c0;
  return interp_matrix(rule.nodes, pts);
}

// Projection of data living on one half (centred at `centre`, +-1/2) and
// parametrised by s = c1 r + c0 with |c1| = 2 onto the whole interval.
Mat project_half(const HalfOps1D& half, double c1, double centre) {
  const Mat& P = centre < 0 ? half.Pb : half.Pt;
  return c1 > 0 ? P : Mat(P * reversal(static_cast<int>(P.rows())));
}

void check_ratio(double c1) {
  const double a = std::abs(c1);
  if (a != 1.0 && a != 2.0 && a != 0.5)
    throw std::invalid_argument("mortar operators: only 2:1 size ratios are supported");
}

}  // namespace

Mat face_to_mortar_1d(const LglRule& rule, const HalfOps1D& half, double c1, double c0) {
  check_ratio(c1);
  if (std::abs(c1) <= 1.0) return interpolate_affine(rule, c1, c0);
  return project_half(half, c1, -c0 / c1);
}

Mat mortar_to_face_1d(const LglRule& rule, const HalfOps1D& half, double c1, double c0) {
  check_ratio(c1);
  if (std::abs(c1) >= 1.0) return interpolate_affine(rule, 1.0 / c1, -c0 / c1);
  return project_half(half, 1.0 / c1, c0);
}

namespace {

SideOps make_side(const LglRule& rule, const HalfOps1D& half, const MortarSide& s) {
  SideOps o;
  o.ref = s.ref;
  o.identity = s.map[0].mortar_axis == 0 && s.map[1].mortar_axis == 1;
  for (int t = 0; t < 2; ++t) {
    o.mortar_axis[t] = s.map[t].mortar_axis;
    o.identity = o.identity && s.map[t].c1 == 1.0 && s.map[t].c0 == 0.0;
    o.to_mortar[t] = face_to_mortar_1d(rule, half, s.map[t].c1, s.map[t].c0);
    o.to_face[t] = mortar_to_face_1d(rule, half, s.map[t].c1, s.map[t].c0);
  }
  return o;
}

// out(i, j) = sum_{a, b} A0[i, a] A1[j, b] in(a, b) where in is indexed by
// face axes (a fastest) and out by mortar axes (i fastest). `axis` gives the
// mortar axis fed by each face axis. A0, A1 are n x n.
void contract_to_mortar(int n, const Mat& A0, const Mat& A1, const std::array<int, 2>& axis,
                        const double* in, double* out, bool accumulate) {
  double tmp[256];
  double res[256];
  // tmp(i0, b) = sum_a A0[i0, a] in(a, b)
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += A0(i, a) * in[a + n * b];
      tmp[i + n * b] = s;
    }
  // res(i0, i1) = sum_b A1[i1, b] tmp(i0, b)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += A1(j, b) * tmp[i + n * b];
      res[i + n * j] = s;
    }
  const bool swap = axis[0] == 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int dst = swap ? j + n * i : i + n * j;
      if (accumulate) out[dst] += res[i + n * j];
      else out[dst] = res[i + n * j];
    }
}

// out(a, b) = sum_{i, j} B0[a, i] B1[b, j] in(i, j) with in indexed by the
// mortar axes fed by face axes 0 and 1. B0, B1 are n x n, or transposed when
// `transposed` is set.
void contract_to_face(int n, const Mat& B0, const Mat& B1, bool transposed,
                      const std::array<int, 2>& axis, const double* in, double* out,
                      bool accumulate) {
  double src[256];
  double tmp[256];
  const bool swap = axis[0] == 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) src[i + n * j] = swap ? in[j + n * i] : in[i + n * j];
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += (transposed ? B0(i, a) : B0(a, i)) * src[i + n * j];
      tmp[a + n * j] = s;
    }
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += (transposed ? B1(j, b) : B1(b, j)) * tmp[a + n * j];
      if (accumulate) out[a + n * b] += s;
      else out[a + n * b] = s;
    }
}

void copy_or_add(int len, const double* in, double* out, bool accumulate) {
  if (accumulate)
    for (int i = 0; i < len; ++i) out[i] += in[i];
  else
    std::memcpy(out, in, sizeof(double) * len);
}

}  // namespace

MortarOperators::MortarOperators(const TensorOps3D& ops, const MortarSet& mortars)
    : n_(ops.n()), half_(build_half_ops(ops.order())) {
  if (n_ > 16) throw std::invalid_argument("MortarOperators: order above 15 not supported");
  minus_.reserve(mortars.mortars.size());
  plus_.reserve(mortars.mortars.size());
  for (const auto& m : mortars.mortars) {
    minus_.push_back(make_side(ops.rule(), half_, m.minus));
    std::vector<SideOps> ps;
    for (const auto& p : m.plus) ps.push_back(make_side(ops.rule(), half_, p));
    plus_.push_back(std::move(ps));
  }
}

const SideOps& MortarOperators::side(int m, int s) const {
  return s < 0 ? minus_[m] : plus_[m][s];
}

void MortarOperators::to_mortar(int m, int s, const double* face, double* mortar,
                                bool accumulate) const {
  const SideOps& o = side(m, s);
  if (o.identity) return copy_or_add(n_ * n_, face, mortar, accumulate);
  contract_to_mortar(n_, o.to_mortar[0], o.to_mortar[1], o.mortar_axis, face, mortar, accumulate);
}

void MortarOperators::transpose(int m, int s, const double* mortar, double* face,
                                bool accumulate) const {
  const SideOps& o = side(m, s);
  if (o.identity) return copy_or_add(n_ * n_, mortar, face, accumulate);
  contract_to_face(n_, o.to_mortar[0], o.to_mortar[1], true, o.mortar_axis, mortar, face,
                   accumulate);
}

void MortarOperators::to_face(int m, int s, const double* mortar, double* face,
                              bool accumulate) const {
  const SideOps& o = side(m, s);
  if (o.identity) return copy_or_add(n_ * n_, mortar, face, accumulate);
  contract_to_face(n_, o.to_face[0], o.to_face[1], false, o.mortar_axis, mortar, face,
                   accumulate);
}

Mat MortarOperators::dense(int m, int s) const {
  const int k = n_ * n_;
  Mat P(k, k);
  std::vector<double> e(k, 0.0), col(k);
  for (int j = 0; j < k; ++j) {
    e[j] = 1.0;
    to_mortar(m, s, e.data(), col.data());
    for (int i = 0; i < k; ++i) P(i, j) = col[i];
    e[j] = 0.0;
  }
  return P;
}

}  // namespace mdg
