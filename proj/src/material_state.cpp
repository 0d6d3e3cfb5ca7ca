#include "mortar_dg/material_state.hpp"

#include "mortar_dg/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdg {

Voigt compliance_apply(double lambda, double mu, const Voigt& s) {
  const double tr = s[0] + s[1] + s[2];
  const double vol = -lambda / (2.0 * mu * (2.0 * mu + 3.0 * lambda)) * tr;
  const double inv = 1.0 / (2.0 * mu);
  return {vol + inv * s[0], vol + inv * s[1], vol + inv * s[2],
          inv * s[3], inv * s[4], inv * s[5]};
}

Voigt stiffness_apply(double lambda, double mu, const Voigt& e) {
  const double ltr = lambda * (e[0] + e[1] + e[2]);
  return {ltr + 2.0 * mu * e[0], ltr + 2.0 * mu * e[1], ltr + 2.0 * mu * e[2],
          2.0 * mu * e[3], 2.0 * mu * e[4], 2.0 * mu * e[5]};
}

double voigt_contract(const Voigt& a, const Voigt& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + 2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5]);
}

MaterialField MaterialField::uniform(int num_elements, int nodes, double rho, double lambda,
                                     double mu) {
  MaterialField m;
  m.num_elements = num_elements;
  m.nodes = nodes;
  const std::size_t len = static_cast<std::size_t>(num_elements) * nodes;
  m.rho.assign(len, rho);
  m.lambda.assign(len, lambda);
  m.mu.assign(len, mu);
  m.finalize();
  return m;
}

MaterialField MaterialField::random(int num_elements, int nodes, std::uint64_t seed,
                                    const MaterialRanges& r) {
  MaterialField m;
  m.num_elements = num_elements;
  m.nodes = nodes;
  const std::size_t len = static_cast<std::size_t>(num_elements) * nodes;
  m.rho.resize(len);
  m.lambda.resize(len);
  m.mu.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    m.rho[i] = counter_uniform(seed, 1, i, r.rho[0], r.rho[1]);
    m.mu[i] = counter_uniform(seed, 2, i, r.mu[0], r.mu[1]);
    m.lambda[i] = counter_uniform(seed, 3, i, r.lambda[0], r.lambda[1]);
  }
  m.finalize();
  return m;
}

void MaterialField::finalize() {
  const std::size_t len = static_cast<std::size_t>(num_elements) * nodes;
  if (rho.size() != len || lambda.size() != len || mu.size() != len)
    throw std::invalid_argument("MaterialField: field sizes do not match the mesh");
  cp.resize(len);
  cs.resize(len);
  zp.resize(len);
  zs.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (!(rho[i] > 0.0) || !(mu[i] > 0.0) || !(lambda[i] + 2.0 * mu[i] / 3.0 > 0.0))
      throw std::invalid_argument("MaterialField: material is not positive definite");
    cp[i] = std::sqrt((lambda[i] + 2.0 * mu[i]) / rho[i]);
    cs[i] = std::sqrt(mu[i] / rho[i]);
    zp[i] = std::sqrt(rho[i] * (lambda[i] + 2.0 * mu[i]));
    zs[i] = std::sqrt(rho[i] * mu[i]);
  }
}

double MaterialField::max_cp() const { return *std::max_element(cp.begin(), cp.end()); }
double MaterialField::min_cs() const { return *std::min_element(cs.begin(), cs.end()); }

bool State::finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

double energy_inner(const State& a, const State& b, const MaterialField& mat,
                    const std::vector<double>& wJ) {
  const int n = a.nodes;
  double total = 0.0;
  for (int e = 0; e < a.num_elements; ++e) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::size_t g = static_cast<std::size_t>(e) * n + i;
      double kin = 0.0;
      for (int c = 0; c < 3; ++c) kin += a.field(e, c)[i] * b.field(e, c)[i];
      Voigt sa, sb;
      for (int c = 0; c < 6; ++c) {
        sa[c] = a.field(e, 3 + c)[i];
        sb[c] = b.field(e, 3 + c)[i];
      }
      const double pot = voigt_contract(compliance_apply(mat.lambda[g], mat.mu[g], sa), sb);
      acc += wJ[g] * (mat.rho[g] * kin + pot);
    }
    total += acc;
  }
  return total;
}

double discrete_energy(const State& q, const MaterialField& mat, const std::vector<double>& wJ) {
  return 0.5 * energy_inner(q, q, mat, wJ);
}

State random_state(int num_elements, int nodes, std::uint64_t seed, double lo, double hi) {
  State q(num_elements, nodes);
  for (std::size_t i = 0; i < q.data.size(); ++i) q.data[i] = counter_uniform(seed, 7, i, lo, hi);
  return q;
}

}  // namespace mdg
