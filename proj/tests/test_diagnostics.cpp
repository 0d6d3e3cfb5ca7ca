#include "doctest.h"
#include "mortar_dg/experiment.hpp"
#include "mortar_dg/spectral_probe.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace mdg;

namespace {

constexpr double kRho = 2.0, kLambda = 4.0, kMu = 3.0;

MeshSpec box36() {
  MeshSpec s;
  s.base = {2, 2, 2};
  s.refined = alternating_cells(s.base);
  return s;
}

MeshSpec conforming(int b) {
  MeshSpec s;
  s.base = {b, b, b};
  return s;
}

// Displacement of the planewave, differentiated numerically below.
Vec3 displacement(const Vec3& x, double t) {
  const double cp = std::sqrt((kLambda + 2 * kMu) / kRho), cs = std::sqrt(kMu / kRho);
  const double k = 2 * std::numbers::pi;
  return {std::cos(k * (cp * t + x[0])), std::cos(k * (cs * t + x[0])), std::cos(k * (cs * t + x[0]))};
}

ExactSolution planewave() {
  return [](const Vec3& x, double t) { return planewave_exact(x, t, kRho, kLambda, kMu); };
}

}  // namespace

TEST_CASE("wave speeds for the reference material") {
  CHECK(p_wave_speed(kRho, kLambda, kMu) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(s_wave_speed(kRho, kMu) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
}

TEST_CASE("planewave phase at the origin") {
  const PointState s = planewave_exact({0, 0, 0}, 0.0, kRho, kLambda, kMu);
  CHECK(s.v[0] == 0.0);
  CHECK(s.v[1] == 0.0);
}

TEST_CASE("planewave matches finite differences of the displacement") {
  const double h = 1e-5;
  for (const Vec3 x : {Vec3{0.13, 0.7, -0.2}, Vec3{0.61, 0.1, 0.9}})
    for (double t : {0.0, 0.37, 2.9}) {
      const PointState s = planewave_exact(x, t, kRho, kLambda, kMu);
      double grad[3][3];
      for (int j = 0; j < 3; ++j) {
        Vec3 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const Vec3 up = displacement(xp, t), um = displacement(xm, t);
        for (int i = 0; i < 3; ++i) grad[i][j] = (up[i] - um[i]) / (2 * h);
      }
      const Vec3 up = displacement(x, t + h), um = displacement(x, t - h);
      for (int i = 0; i < 3; ++i) CHECK(s.v[i] == doctest::Approx((up[i] - um[i]) / (2 * h)).epsilon(1e-7));
      const double div = grad[0][0] + grad[1][1] + grad[2][2];
      const int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
      for (int c = 0; c < 6; ++c) {
        const int i = pairs[c][0], j = pairs[c][1];
        const double ref = (i == j ? kLambda * div : 0.0) + kMu * (grad[i][j] + grad[j][i]);
        CHECK(s.sigma[c] == doctest::Approx(ref).epsilon(1e-6).scale(1.0));
      }
      CHECK(s.sigma[3] == 0.0);
    }
}

TEST_CASE("planewave rate is the time derivative and satisfies the equations of motion") {
  const double h = 1e-5;
  const Vec3 x{0.31, 0.2, 0.4};
  const double t = 0.77;
  const PointState r = planewave_rate(x, t, kRho, kLambda, kMu);
  const PointState p = planewave_exact(x, t + h, kRho, kLambda, kMu);
  const PointState m = planewave_exact(x, t - h, kRho, kLambda, kMu);
  for (int i = 0; i < 3; ++i) CHECK(r.v[i] == doctest::Approx((p.v[i] - m.v[i]) / (2 * h)).epsilon(1e-7));
  for (int c = 0; c < 6; ++c)
    CHECK(r.sigma[c] == doctest::Approx((p.sigma[c] - m.sigma[c]) / (2 * h)).epsilon(1e-6).scale(1.0));
  // rho dv/dt = div sigma, with only x1 derivatives present.
  Vec3 xp = x, xm = x;
  xp[0] += h;
  xm[0] -= h;
  const PointState sp = planewave_exact(xp, t, kRho, kLambda, kMu);
  const PointState sm = planewave_exact(xm, t, kRho, kLambda, kMu);
  const int col[3] = {0, 5, 4};  // sigma_11, sigma_21, sigma_31
  for (int i = 0; i < 3; ++i)
    CHECK(kRho * r.v[i] == doctest::Approx((sp.sigma[col[i]] - sm.sigma[col[i]]) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("discrete planewave rhs converges to the analytic rate") {
  // Conforming periodic box; the rhs error must fall faster than h^3 for N = 4.
  double prev = 0.0;
  for (int b : {2, 4}) {
    ProblemSpec s;
    s.mesh = conforming(b);
    s.order = 4;
    s.material = MaterialSpec::uniform(kRho, kLambda, kMu);
    Problem p(s);
    State q = sample_solution(p.geometry(), planewave(), 0.3);
    State dq = p.make_state();
    p.op().rhs(q, dq);
    dq.t = 0.3;
    const ExactSolution rate = [](const Vec3& x, double t) { return planewave_rate(x, t, kRho, kLambda, kMu); };
    const double err = l2_energy_error(dq, rate, p.material(), p.geometry());
    const double scale = std::sqrt(discrete_energy(sample_solution(p.geometry(), rate, 0.3), p.material(),
                                                   p.geometry().wJ));
    if (b == 2) {
      CHECK(err / scale < 0.05);
      prev = err;
    } else {
      CHECK(std::log2(prev / err) > 3.5);
    }
  }
}

TEST_CASE("energy error of the exact state vanishes and a perturbation is measured exactly") {
  ProblemSpec s;
  s.mesh = box36();
  s.order = 3;
  s.material = MaterialSpec::uniform(kRho, kLambda, kMu);
  Problem p(s);
  State q = sample_solution(p.geometry(), planewave(), 0.4);
  CHECK(l2_energy_error(q, planewave(), p.material(), p.geometry()) == 0.0);
  const double eps = 1e-3;
  for (int e = 0; e < q.num_elements; ++e)
    for (int n = 0; n < q.nodes; ++n) q.field(e, 0)[n] += eps;
  const double expected = std::sqrt(0.5 * kRho) * eps * std::sqrt(1.0);
  CHECK(l2_energy_error(q, planewave(), p.material(), p.geometry()) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("conservation error components") {
  ProblemSpec s;
  s.mesh = box36();
  s.order = 2;
  s.material = MaterialSpec::uniform(kRho, kLambda, kMu);
  Problem p(s);
  const State q0 = constant_state(p.mesh().num_elements(), p.ops().volume_size());

  SUBCASE("unchanged state") {
    const ConservationError c = conservation_error(q0, q0, p.material(), p.geometry());
    CHECK(c.total() == 0.0);
  }
  SUBCASE("uniform velocity shift") {
    State q = q0;
    for (int e = 0; e < q.num_elements; ++e)
      for (int n = 0; n < q.nodes; ++n) q.field(e, 1)[n] += 0.5;
    const ConservationError c = conservation_error(q, q0, p.material(), p.geometry());
    // |int rho (v2 + 0.5 - v2)| / |int rho v2| = 0.5 / 2.
    CHECK(c.momentum[1] == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(c.momentum[0] == 0.0);
    CHECK(c.strain_sum() == 0.0);
  }
  SUBCASE("shear stress shift enters both off-diagonal strain entries") {
    State q = q0;
    for (int e = 0; e < q.num_elements; ++e)
      for (int n = 0; n < q.nodes; ++n) q.field(e, 3 + 5)[n] += 1.0;  // sigma_12
    const ConservationError c = conservation_error(q, q0, p.material(), p.geometry());
    // eps_12 = sigma_12 / (2 mu): relative change 1 / 5.
    CHECK(c.strain[1] == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(c.strain[3] == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(c.strain[0] == 0.0);
    CHECK(c.momentum_sum() == 0.0);
  }
  SUBCASE("vanishing initial integral is reported unnormalized") {
    State z = q0;
    for (int e = 0; e < z.num_elements; ++e)
      for (int n = 0; n < z.nodes; ++n) z.field(e, 0)[n] = 0.0;
    State q = z;
    for (int e = 0; e < q.num_elements; ++e)
      for (int n = 0; n < q.nodes; ++n) q.field(e, 0)[n] = 1e-3;
    const ConservationError c = conservation_error(q, z, p.material(), p.geometry());
    CHECK(c.unnormalized[0]);
    CHECK_FALSE(c.unnormalized[1]);
    // int rho * 1e-3 over the unit cube.
    CHECK(c.momentum[0] == doctest::Approx(kRho * 1e-3).epsilon(1e-13));
  }
}

TEST_CASE("normalized drift") {
  const State q0 = random_state(4, 8, 3);
  const MaterialField mat = MaterialField::uniform(4, 8, kRho, kLambda, kMu);
  const std::vector<double> wJ(32, 0.25);
  CHECK(normalized_drift(q0, q0, mat, wJ) == 0.0);
  State q = q0;
  for (double& x : q.data) x *= 3.0;
  CHECK(normalized_drift(q, q0, mat, wJ) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("constant state layout") {
  const State q = constant_state(2, 3);
  // v1 v2 v3, then sigma in (11, 22, 33, 23, 13, 12) order.
  const double expect[9] = {1, 2, 3, 4, 7, 9, 8, 6, 5};
  for (int e = 0; e < 2; ++e)
    for (int c = 0; c < 9; ++c)
      for (int n = 0; n < 3; ++n) CHECK(q.field(e, c)[n] == expect[c]);
}

TEST_CASE("reference time and rates") {
  CHECK(reference_time() == doctest::Approx(0.7745966692414834).epsilon(1e-15));
  CHECK(convergence_rate(4.0, 1.0) == doctest::Approx(2.0));
  CHECK(convergence_rate(1.9, 5.6e-2) == doctest::Approx(5.084).epsilon(1e-3));
}

TEST_CASE("energy mass and its inverse") {
  const int E = 3, nv = 5;
  const MaterialField mat = MaterialField::random(E, nv, 9);
  std::vector<double> wJ(E * nv);
  for (std::size_t i = 0; i < wJ.size(); ++i) wJ[i] = 0.1 + 0.01 * static_cast<double>(i);
  const State a = random_state(E, nv, 1), b = random_state(E, nv, 2);
  State ma, back;
  apply_energy_mass(b, ma, mat, wJ);
  double dot = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) dot += a.data[i] * ma.data[i];
  CHECK(dot == doctest::Approx(energy_inner(a, b, mat, wJ)).epsilon(1e-13));
  apply_inverse_energy_mass(ma, back, mat, wJ);
  for (std::size_t i = 0; i < b.data.size(); ++i) CHECK(back.data[i] == doctest::Approx(b.data[i]).epsilon(1e-12));
}

TEST_CASE("symmetrized growth bounds every Rayleigh quotient") {
  for (Scheme scheme : {Scheme::Sfim, Scheme::Afim}) {
    ProblemSpec s;
    s.mesh = box36();
    s.order = 1;
    s.scheme = scheme;
    s.alpha = 0.0;
    s.material = MaterialSpec::uniform(kRho, kLambda, kMu);
    Problem p(s);
    const int E = p.mesh().num_elements(), nv = p.ops().volume_size();
    const auto A = assemble_operator(p.op(), E, nv);
    const State q = random_state(E, nv, 4);
    State dq = p.make_state();
    p.op().rhs(q, dq);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(q.data.data(), static_cast<Eigen::Index>(q.data.size()));
    const Eigen::VectorXd y = A * x;
    for (Eigen::Index i = 0; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(dq.data[i]).epsilon(1e-12).scale(1.0));

    const GrowthBound g = symmetrized_growth(p.op(), A, E, nv, 5, 400);
    for (std::uint64_t seed = 10; seed < 20; ++seed) {
      const State r = random_state(E, nv, seed);
      p.op().rhs(r, dq);
      const double quotient = energy_inner(r, dq, p.material(), p.geometry().wJ) /
                              energy_inner(r, r, p.material(), p.geometry().wJ);
      CHECK(quotient <= g.max_rate + 1e-10);
      CHECK(quotient >= g.min_rate - 1e-10);
    }
    CHECK(g.witness_rate == doctest::Approx(g.max_rate).epsilon(1e-6).scale(1.0));
    if (scheme == Scheme::Sfim)
      CHECK(std::abs(g.max_rate) <= 1e-10);
    else
      CHECK(g.max_rate > 1e-3);
  }
}

TEST_CASE("experiment config round trip and validation") {
  ExperimentConfig c;
  c.kind = ExperimentKind::Constant;
  c.mesh = box36();
  c.transform = "skew";
  c.amplitude = 0.5;
  c.treatment = GeometryTreatment::Watertight;
  c.scheme = Scheme::Afim;
  c.mortar = MortarKind::SplitSide;
  c.alpha = 0.25;
  c.orders = {2, 3};
  c.material = MaterialSpec::random_field(11);
  c.time_unit = TimeUnit::ShearTransit;
  c.fixed_steps = 7;
  const nlohmann::json j = c.to_json();
  const ExperimentConfig back = ExperimentConfig::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.mesh.refined.size() == 4);

  auto broken = [&](const char* key, nlohmann::json value) {
    nlohmann::json k = j;
    k[key] = value;
    CHECK_THROWS_AS(ExperimentConfig::from_json(k), std::invalid_argument);
  };
  broken("experiment", "eigen");
  broken("geometry", "smooth");
  broken("scheme", "central");
  broken("mortar", "half-side");
  broken("time_unit", "hours");
  broken("alpha", 2.0);
  broken("cfl", 0.0);
  broken("colour", "red");
  broken("orders", nlohmann::json::array({0}));
}

TEST_CASE("divcheck experiment writes its table") {
  ExperimentConfig c;
  c.kind = ExperimentKind::Divcheck;
  c.mesh = box36();
  c.transform = "skew";
  c.orders = {2, 3};
  const RunReport r = run_experiment(c);
  REQUIRE(r.divcheck.size() == 4);
  for (const auto& row : r.divcheck) CHECK(row.residual <= 1e-12);
  CHECK(r.violations.empty());
  const auto dir = std::filesystem::temp_directory_path() / "mortar_dg_divcheck_test";
  write_report(r, dir);
  std::ifstream csv(dir / "divcheck.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "order,mortar,residual,freestream");
  CHECK(std::filesystem::exists(dir / "report.json"));
}

TEST_CASE("upwind evolution never gains energy and a fixed step count is honoured") {
  ExperimentConfig c;
  c.kind = ExperimentKind::Longtime;
  c.mesh = box36();
  c.transform = "skew";
  c.treatment = GeometryTreatment::Interpolated;
  c.order = 2;
  c.material = MaterialSpec::random_field(3);
  c.final_time = 0.2;
  c.fixed_steps = 40;
  c.snapshots = 4;
  const RunReport r = run_experiment(c);
  CHECK_FALSE(r.diverged);
  CHECK(r.summary["steps"].get<int>() == 40);
  CHECK(r.energy_trace.size() == 41);
  CHECK(r.summary["energy_increases"].get<int>() == 0);
  CHECK(r.summary["relative_energy_loss"].get<double>() > 0.0);
  CHECK(r.snapshots.size() == 5);
  CHECK(r.snapshots.back().t == doctest::Approx(0.2 * reference_time()).epsilon(1e-13));
}

TEST_CASE("constant experiment with continuous metrics stays put") {
  ExperimentConfig c;
  c.kind = ExperimentKind::Constant;
  c.mesh = box36();
  c.transform = "skew";
  c.order = 2;
  c.material = MaterialSpec::random_field(3);
  c.final_time = 0.1;
  c.fixed_steps = 20;
  const RunReport r = run_experiment(c);
  CHECK(r.summary["max_drift"].get<double>() <= 1e-12);
  CHECK(r.summary["max_conservation_error"].get<double>() <= 1e-12);
}

TEST_CASE("divergence is reported with its time") {
  ExperimentConfig c;
  c.kind = ExperimentKind::Longtime;
  c.mesh = box36();
  c.order = 2;
  c.cfl = 3.0;
  c.final_time = 20.0;
  const RunReport r = run_experiment(c);
  CHECK(r.diverged);
  CHECK(r.failure_time > 0.0);
  CHECK(r.failure_time < 20.0 * reference_time());
  CHECK(r.to_json().contains("failure_time"));
}
