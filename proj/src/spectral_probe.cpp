#include "mortar_dg/spectral_probe.hpp"

#include "mortar_dg/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mdg {

namespace {

using Vec = Eigen::VectorXd;

void from_state(const State& q, Vec& v) {
  v = Eigen::Map<const Vec>(q.data.data(), static_cast<Eigen::Index>(q.data.size()));
}

void to_state(const Vec& v, State& q) {
  Eigen::Map<Vec>(q.data.data(), static_cast<Eigen::Index>(q.data.size())) = v;
}

// Applies either the energy mass matrix or its inverse node by node.
void mass_apply(const State& q, State& y, const MaterialField& mat, const std::vector<double>& wJ,
                bool inverse) {
  y = State(q.num_elements, q.nodes);
  y.t = q.t;
  const int nv = q.nodes;
  for (int e = 0; e < q.num_elements; ++e)
    for (int p = 0; p < nv; ++p) {
      const std::size_t gi = static_cast<std::size_t>(e) * nv + p;
      const double w = wJ[gi], rho = mat.rho[gi];
      for (int c = 0; c < 3; ++c)
        y.field(e, c)[p] = inverse ? q.field(e, c)[p] / (w * rho) : q.field(e, c)[p] * w * rho;
      Voigt s;
      for (int c = 0; c < 6; ++c) s[c] = q.field(e, 3 + c)[p];
      Voigt out;
      if (inverse) {
        // The stress block of M is wJ * diag(1,1,1,2,2,2) * S.
        for (int c = 3; c < 6; ++c) s[c] *= 0.5;
        out = stiffness_apply(mat.lambda[gi], mat.mu[gi], s);
        for (double& o : out) o /= w;
      } else {
        out = compliance_apply(mat.lambda[gi], mat.mu[gi], s);
        for (int c = 0; c < 6; ++c) out[c] *= (c < 3 ? 1.0 : 2.0) * w;
      }
      for (int c = 0; c < 6; ++c) y.field(e, 3 + c)[p] = out[c];
    }
}

}  // namespace

void apply_energy_mass(const State& q, State& y, const MaterialField& mat,
                       const std::vector<double>& wJ) {
  mass_apply(q, y, mat, wJ, false);
}

void apply_inverse_energy_mass(const State& q, State& y, const MaterialField& mat,
                               const std::vector<double>& wJ) {
  mass_apply(q, y, mat, wJ, true);
}

Eigen::SparseMatrix<double> assemble_operator(const DgOperator& op, int num_elements, int nodes,
                                              double drop_tol) {
  State q(num_elements, nodes), dq(num_elements, nodes);
  const Eigen::Index n = static_cast<Eigen::Index>(q.data.size());
  Eigen::SparseMatrix<double> A(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    q.data[j] = 1.0;
    op.rhs(q, dq);
    q.data[j] = 0.0;
    A.startVec(j);
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(dq.data[i]) > drop_tol) A.insertBack(i, j) = dq.data[i];
  }
  A.finalize();
  return A;
}

GrowthBound symmetrized_growth(const DgOperator& op, const Eigen::SparseMatrix<double>& A,
                               int num_elements, int nodes, std::uint64_t seed,
                               int max_iterations, double tol) {
  const MaterialField& mat = op.material();
  const std::vector<double>& wJ = op.geometry().wJ;
  State s(num_elements, nodes), ms(num_elements, nodes);
  const Eigen::Index n = static_cast<Eigen::Index>(s.data.size());
  if (A.rows() != n || A.cols() != n) throw std::invalid_argument("symmetrized_growth: size mismatch");

  auto mass = [&](const Vec& x, bool inverse) {
    to_state(x, s);
    mass_apply(s, ms, mat, wJ, inverse);
    Vec y;
    from_state(ms, y);
    return y;
  };
  auto h_apply = [&](const Vec& x) -> Vec {
    return 0.5 * (A * x + mass(A.transpose() * mass(x, false), true));
  };

  const int kmax = std::min<Eigen::Index>(max_iterations, n);
  std::vector<Vec> basis, mbasis;
  std::vector<double> alpha, beta;
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = counter_uniform(seed, 11, static_cast<std::uint64_t>(i), -1.0, 1.0);
  Vec mv = mass(v, false);
  double nrm = std::sqrt(v.dot(mv));
  v /= nrm;
  mv /= nrm;

  GrowthBound out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  for (int j = 0; j < kmax; ++j) {
    basis.push_back(v);
    mbasis.push_back(mv);
    Vec w = h_apply(v);
    alpha.push_back(mv.dot(w));
    // Two passes of Gram-Schmidt against the whole basis in the M inner product.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < basis.size(); ++i) w -= mbasis[i].dot(w) * basis[i];
    Vec mw = mass(w, false);
    const double b = std::sqrt(std::max(0.0, w.dot(mw)));

    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                : Eigen::VectorXd(0);
    tri.computeFromTridiagonal(diag, sub);
    const double scale = std::max({1.0, std::abs(tri.eigenvalues()(0)), std::abs(tri.eigenvalues()(m - 1))});
    const double resid = b * std::abs(tri.eigenvectors()(m - 1, m - 1));
    out.iterations = m;
    if (resid <= tol * scale || b <= tol * scale || j + 1 == kmax) break;
    beta.push_back(b);
    v = w / b;
    mv = mw / b;
  }

  const int m = out.iterations;
  out.max_rate = tri.eigenvalues()(m - 1);
  out.min_rate = tri.eigenvalues()(0);
  Vec ritz = Vec::Zero(n);
  for (int i = 0; i < m; ++i) ritz += tri.eigenvectors()(i, m - 1) * basis[i];
  out.witness = State(num_elements, nodes);
  to_state(ritz, out.witness);
  State dq(num_elements, nodes);
  op.rhs(out.witness, dq);
  out.witness_rate = energy_inner(out.witness, dq, mat, wJ) / energy_inner(out.witness, out.witness, mat, wJ);
  return out;
}

}  // namespace mdg
