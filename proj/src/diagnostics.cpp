#include "mortar_dg/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdg {

double p_wave_speed(double rho, double lambda, double mu) { return std::sqrt((lambda + 2.0 * mu) / rho); }

double s_wave_speed(double rho, double mu) { return std::sqrt(mu / rho); }

PointState planewave_exact(const Vec3& x, double t, double rho, double lambda, double mu) {
  const double k = 2.0 * std::numbers::pi;
  const double cp = p_wave_speed(rho, lambda, mu), cs = s_wave_speed(rho, mu);
  const double sp = std::sin(k * (cp * t + x[0])), ss = std::sin(k * (cs * t + x[0]));
  PointState s;
  s.v = {-k * cp * sp, -k * cs * ss, -k * cs * ss};
  // Only du_i/dx1 is nonzero.
  const double du1 = -k * sp, du23 = -k * ss;
  s.sigma = {(lambda + 2.0 * mu) * du1, lambda * du1, lambda * du1, 0.0, mu * du23, mu * du23};
  return s;
}

PointState planewave_rate(const Vec3& x, double t, double rho, double lambda, double mu) {
  const double k = 2.0 * std::numbers::pi;
  const double cp = p_wave_speed(rho, lambda, mu), cs = s_wave_speed(rho, mu);
  const double cpp = std::cos(k * (cp * t + x[0])), css = std::cos(k * (cs * t + x[0]));
  PointState s;
  s.v = {-k * k * cp * cp * cpp, -k * k * cs * cs * css, -k * k * cs * cs * css};
  const double du1 = -k * k * cp * cpp, du23 = -k * k * cs * css;
  s.sigma = {(lambda + 2.0 * mu) * du1, lambda * du1, lambda * du1, 0.0, mu * du23, mu * du23};
  return s;
}

State sample_solution(const Geometry& g, const ExactSolution& exact, double t) {
  State q(g.num_elements, g.nodes);
  q.t = t;
  for (int e = 0; e < g.num_elements; ++e)
    for (int p = 0; p < g.nodes; ++p) {
      const Vec3 x{g.coord(e, 0)[p], g.coord(e, 1)[p], g.coord(e, 2)[p]};
      const PointState s = exact(x, t);
      for (int c = 0; c < 3; ++c) q.field(e, c)[p] = s.v[c];
      for (int c = 0; c < 6; ++c) q.field(e, 3 + c)[p] = s.sigma[c];
    }
  return q;
}

double l2_energy_error(const State& q, const ExactSolution& exact, const MaterialField& mat,
                       const Geometry& g) {
  State diff = sample_solution(g, exact, q.t);
  for (std::size_t i = 0; i < diff.data.size(); ++i) diff.data[i] = q.data[i] - diff.data[i];
  return std::sqrt(discrete_energy(diff, mat, g.wJ));
}

double ConservationError::momentum_sum() const {
  return momentum[0] + momentum[1] + momentum[2];
}

double ConservationError::strain_sum() const {
  double s = 0.0;
  for (double x : strain) s += x;
  return s;
}

namespace {

// Quadrature integrals of rho v_i (3) and eps in Voigt order (6).
std::array<double, 9> conserved_integrals(const State& q, const MaterialField& mat,
                                          const std::vector<double>& wJ) {
  std::array<double, 9> sum{};
  const int nv = q.nodes;
  for (int e = 0; e < q.num_elements; ++e)
    for (int p = 0; p < nv; ++p) {
      const std::size_t gi = static_cast<std::size_t>(e) * nv + p;
      const double w = wJ[gi];
      for (int c = 0; c < 3; ++c) sum[c] += w * mat.rho[gi] * q.field(e, c)[p];
      Voigt s;
      for (int c = 0; c < 6; ++c) s[c] = q.field(e, 3 + c)[p];
      const Voigt eps = compliance_apply(mat.lambda[gi], mat.mu[gi], s);
      for (int c = 0; c < 6; ++c) sum[3 + c] += w * eps[c];
    }
  return sum;
}

constexpr int kVoigtOf[3][3] = {{0, 5, 4}, {5, 1, 3}, {4, 3, 2}};

}  // namespace

ConservationError conservation_error(const State& q, const State& q0, const MaterialField& mat,
                                     const Geometry& g) {
  if (q.data.size() != q0.data.size())
    throw std::invalid_argument("conservation_error: state sizes differ");
  const auto now = conserved_integrals(q, mat, g.wJ);
  const auto init = conserved_integrals(q0, mat, g.wJ);
  ConservationError out;
  auto component = [&](int c, double& err, bool& flag) {
    const double diff = std::abs(now[c] - init[c]);
    flag = init[c] == 0.0;
    err = flag ? diff : diff / std::abs(init[c]);
  };
  for (int i = 0; i < 3; ++i) component(i, out.momentum[i], out.unnormalized[i]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      component(3 + kVoigtOf[i][j], out.strain[3 * i + j], out.unnormalized[3 + 3 * i + j]);
  return out;
}

double normalized_drift(const State& q, const State& q0, const MaterialField& mat,
                        const std::vector<double>& wJ) {
  State diff = q;
  for (std::size_t i = 0; i < diff.data.size(); ++i) diff.data[i] -= q0.data[i];
  return std::sqrt(discrete_energy(diff, mat, wJ) / discrete_energy(q0, mat, wJ));
}

State constant_state(int num_elements, int nodes) {
  // Voigt order (11, 22, 33, 23, 13, 12).
  constexpr std::array<double, 9> values = {1, 2, 3, 4, 7, 9, 8, 6, 5};
  State q(num_elements, nodes);
  for (int e = 0; e < num_elements; ++e)
    for (int c = 0; c < 9; ++c)
      for (int p = 0; p < nodes; ++p) q.field(e, c)[p] = values[c];
  return q;
}

double reference_time() { return 2.0 * std::sqrt(3.0) / std::sqrt(20.0); }

double convergence_rate(double err_coarse, double err_fine) { return std::log2(err_coarse / err_fine); }

}  // namespace mdg
