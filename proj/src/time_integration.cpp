#include "mortar_dg/time_integration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdg {

// Carpenter and Kennedy (1994), five-stage fourth-order, solution 3.
const std::array<double, 5> Lsrk54::a = {
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
};
const std::array<double, 5> Lsrk54::b = {
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
};
const std::array<double, 5> Lsrk54::c = {
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
};

double stable_dt(const Geometry& g, const MaterialField& mat, int order, double cfl) {
  if (!(cfl > 0.0)) throw std::invalid_argument("stable_dt: cfl must be positive");
  const int nv = g.nodes;
  double beta = std::numeric_limits<double>::infinity();
  for (int e = 0; e < g.num_elements; ++e)
    for (int q = 0; q < nv; ++q) {
      const std::size_t gi = static_cast<std::size_t>(e) * nv + q;
      const double J = g.J[gi];
      for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
          const double d = g.jr(e, k, i)[q] / J;
          s += d * d;
        }
        beta = std::min(beta, 1.0 / (order * std::sqrt(mat.cp[gi] * s)));
      }
    }
  return cfl * beta;
}

void LsrkIntegrator::stage(std::vector<double>& q, const std::vector<double>& k, double a,
                           double b, double dt) {
  if (res_.size() != q.size()) res_.assign(q.size(), 0.0);
  double* res = res_.data();
  const double* kk = k.data();
  double* qq = q.data();
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(q.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    res[i] = a * res[i] + dt * kk[i];
    qq[i] += b * res[i];
  }
}

void LsrkIntegrator::check(const std::vector<double>& q) const {
  for (double v : q)
    if (!std::isfinite(v)) throw std::runtime_error("time integration diverged: non-finite state");
}

void LsrkIntegrator::step(std::vector<double>& q, double t, double dt, const VectorRhs& f) {
  res_.assign(q.size(), 0.0);
  k_.resize(q.size());
  for (int s = 0; s < 5; ++s) {
    f(t + Lsrk54::c[s] * dt, q, k_);
    stage(q, k_, Lsrk54::a[s], Lsrk54::b[s], dt);
  }
  check(q);
}

void LsrkIntegrator::step(State& q, double dt, const StateRhs& f) {
  res_.assign(q.data.size(), 0.0);
  const double t = q.t;
  for (int s = 0; s < 5; ++s) {
    q.t = t + Lsrk54::c[s] * dt;
    f(q, stage_rate_);
    stage(q.data, stage_rate_.data, Lsrk54::a[s], Lsrk54::b[s], dt);
  }
  q.t = t + dt;
  check(q.data);
}

int integrate(State& q, double t_final, double dt_max, const StateRhs& rhs,
              const std::function<void(const State&, int)>& observer) {
  if (!(dt_max > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  const double span = t_final - q.t;
  if (span <= 0.0) return 0;
  const int steps = static_cast<int>(std::ceil(span / dt_max - 1e-12));
  const double dt = span / steps;
  const double t0 = q.t;
  LsrkIntegrator lsrk;
  for (int s = 0; s < steps; ++s) {
    lsrk.step(q, dt, rhs);
    q.t = t0 + (s + 1) * dt;
    if (observer) observer(q, s + 1);
  }
  return steps;
}

}  // namespace mdg
