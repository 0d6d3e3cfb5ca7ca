// Five-stage fourth-order 2N-storage Runge-Kutta and the time-step rule.
#pragma once

#include "mortar_dg/geometry_metrics.hpp"
#include "mortar_dg/material_state.hpp"

#include <array>
#include <functional>
#include <vector>

namespace mdg {

struct Lsrk54 {
  static const std::array<double, 5> a;
  static const std::array<double, 5> b;
  static const std::array<double, 5> c;
};

// dt = cfl * min over nodes and k of beta_k, with
// beta_k = 1 / (N sqrt(C_p |grad r_k|^2)).
double stable_dt(const Geometry& g, const MaterialField& mat, int order, double cfl);

using VectorRhs = std::function<void(double t, const std::vector<double>& q, std::vector<double>& dq)>;

using StateRhs = std::function<void(const State& q, State& dq)>;

class LsrkIntegrator {
 public:
  // One step from t to t + dt. Throws std::runtime_error if the state stops
  // being finite.
  void step(std::vector<double>& q, double t, double dt, const VectorRhs& f);
  // Same for a solution state; the rhs sees q.t at each stage time and q.t
  // ends at t + dt.
  void step(State& q, double dt, const StateRhs& f);

 private:
  void stage(std::vector<double>& q, const std::vector<double>& k, double a, double b, double dt);
  void check(const std::vector<double>& q) const;

  std::vector<double> res_, k_;
  State stage_rate_;
};

// Advances q to t_final with equal steps no larger than dt_max. The observer,
// if set, is called after every step. Returns the number of steps taken.
int integrate(State& q, double t_final, double dt_max, const StateRhs& rhs,
              const std::function<void(const State&, int)>& observer = {});

}  // namespace mdg
