#include "mortar_dg/tensor_basis.hpp"

#include "mortar_dg/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdg {

void legendre_eval(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    const double d2 = d0 + (2 * k + 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  p = p1;
  dp = d1;
}

double legendre(int n, double x) {
  double p, dp;
  legendre_eval(n, x, p, dp);
  return p;
}

LglRule lgl_rule(int N) {
  if (N < 1) throw std::invalid_argument("lgl_rule: order must be at least 1");
  LglRule rule;
  rule.order = N;
  rule.nodes.assign(N + 1, 0.0);
  rule.weights.assign(N + 1, 0.0);
  rule.nodes[0] = -1.0;
  rule.nodes[N] = 1.0;
  for (int k = 1; k < N; ++k) {
    double x = -std::cos(std::numbers::pi * k / N);
    for (int it = 0; it < 100; ++it) {
      double p, dp;
      legendre_eval(N, x, p, dp);
      const double d2p = (2.0 * x * dp - N * (N + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    rule.nodes[k] = x;
  }
  for (int k = 0; 2 * k < N; ++k) {
    const double m = 0.5 * (rule.nodes[k] - rule.nodes[N - k]);
    rule.nodes[k] = m;
    rule.nodes[N - k] = -m;
  }
  if (N % 2 == 0) rule.nodes[N / 2] = 0.0;
  for (int k = 0; k <= N; ++k) {
    const double p = legendre(N, rule.nodes[k]);
    rule.weights[k] = 2.0 / (N * (N + 1.0) * p * p);
  }
  for (int k = 0; 2 * k < N; ++k) {
    const double w = 0.5 * (rule.weights[k] + rule.weights[N - k]);
    rule.weights[k] = w;
    rule.weights[N - k] = w;
  }
  return rule;
}

void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
  x.assign(q, 0.0);
  w.assign(q, 0.0);
  for (int k = 0; k < q; ++k) {
    double t = -std::cos(std::numbers::pi * (k + 0.75) / (q + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_eval(q, t, p, dp);
      const double dt = p / dp;
      t -= dt;
      if (std::abs(dt) <= 1e-16) break;
    }
    legendre_eval(q, t, p, dp);
    x[k] = t;
    w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

namespace {

std::vector<double> barycentric_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> lam(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      const double d = x[j] - x[m];
      if (d == 0.0) throw std::invalid_argument("interp_matrix: duplicate source nodes");
      lam[j] /= d;
    }
  }
  return lam;
}

}  // namespace

Basis1D diff_matrix(const LglRule& rule) {
  Basis1D b;
  b.rule = rule;
  const int n = rule.size();
  const auto& x = rule.nodes;
  const auto lam = barycentric_weights(x);
  b.D = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      b.D(i, j) = (lam[j] / lam[i]) / (x[i] - x[j]);
      diag -= b.D(i, j);
    }
    b.D(i, i) = diag;
  }
  b.DT = b.D.transpose();
  b.tau.assign(n, 0.5);
  const int N = rule.order;
  for (int k = 0; 2 * k < N; ++k) {
    b.tau[k] = 0.5 * (1.0 + x[k]);
    b.tau[N - k] = 1.0 - b.tau[k];
  }
  return b;
}

Mat interp_matrix(const std::vector<double>& src, const std::vector<double>& dst) {
  const auto lam = barycentric_weights(src);
  const int n = static_cast<int>(src.size());
  const int m = static_cast<int>(dst.size());
  Mat I = Mat::Zero(m, n);
  for (int r = 0; r < m; ++r) {
    const double y = dst[r];
    int hit = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(y - src[j]) <= 1e-14) hit = j;
    if (hit >= 0) {
      I(r, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
      I(r, j) = lam[j] / (y - src[j]);
      denom += I(r, j);
    }
    I.row(r) /= denom;
  }
  return I;
}

Mat exact_mass_matrix(const LglRule& rule) {
  std::vector<double> gx, gw;
  gauss_legendre(rule.order + 2, gx, gw);
  const Mat E = interp_matrix(rule.nodes, gx);
  Mat M = Mat::Zero(rule.size(), rule.size());
  for (int q = 0; q < static_cast<int>(gx.size()); ++q)
    M += gw[q] * E.row(q).transpose() * E.row(q);
  return M;
}

Mat modal_transform(const LglRule& rule) {
  const int n = rule.size();
  Mat V(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V(i, j) = legendre(j, rule.nodes[i]);
  return V.fullPivLu().inverse();
}

Mat degree_drop_projection(const LglRule& rule) {
  const int n = rule.size();
  const Mat Vinv = modal_transform(rule);
  Mat P = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    const double pN = legendre(rule.order, rule.nodes[i]);
    for (int j = 0; j < n; ++j) P(i, j) -= pN * Vinv(n - 1, j);
  }
  return P;
}

TensorOps3D::TensorOps3D(int N) : N_(N), n_(N + 1), basis_(diff_matrix(lgl_rule(N))) {
  const int n = n_;
  for (int f = 0; f < 6; ++f) {
    const int a = face_axis(f);
    const auto t = face_tangents(f);
    const int c = face_side(f) ? N : 0;
    auto& nodes = face_nodes_[f];
    nodes.resize(n * n);
    for (int q = 0; q < n; ++q)
      for (int p = 0; p < n; ++p) {
        int idx[3];
        idx[a] = c;
        idx[t[0]] = p;
        idx[t[1]] = q;
        nodes[p + n * q] = idx[0] + n * idx[1] + n * n * idx[2];
      }
  }
  const auto& w = basis_.rule.weights;
  wvol_.resize(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) wvol_[i + n * j + n * n * k] = w[i] * w[j] * w[k];
  wface_.resize(n * n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) wface_[p + n * q] = w[p] * w[q];
}

void TensorOps3D::apply_axis(const Mat& A, const double* in, double* out, int dir,
                             bool accumulate) const {
  if (A.rows() != n_ || A.cols() != n_)
    throw std::invalid_argument("apply_axis: operator shape does not match the basis");
  const Mat AT = A.transpose();
  kernels::active().apply_axis(A.data(), AT.data(), n_, dir, in, out, accumulate);
}

void TensorOps3D::derivative(const double* in, double* out, int dir, bool accumulate) const {
  kernels::active().apply_axis(basis_.D.data(), basis_.DT.data(), n_, dir, in, out,
                               accumulate);
}

void TensorOps3D::derivative_transpose(const double* in, double* out, int dir,
                                       bool accumulate) const {
  kernels::active().apply_axis(basis_.DT.data(), basis_.D.data(), n_, dir, in, out,
                               accumulate);
}

void TensorOps3D::apply_tensor(const std::array<const Mat*, 3>& ops, const double* in,
                               double* out) const {
  std::vector<double> t0(volume_size()), t1(volume_size());
  apply_axis(*ops[0], in, t0.data(), 0);
  apply_axis(*ops[1], t0.data(), t1.data(), 1);
  apply_axis(*ops[2], t1.data(), out, 2);
}

void TensorOps3D::restrict_to_face(int f, const double* vol, double* face) const {
  const auto& nodes = face_nodes_[f];
  for (int i = 0; i < face_size(); ++i) face[i] = vol[nodes[i]];
}

void TensorOps3D::add_from_face(int f, const double* face, double* vol) const {
  const auto& nodes = face_nodes_[f];
  for (int i = 0; i < face_size(); ++i) vol[nodes[i]] += face[i];
}

}  // namespace mdg
