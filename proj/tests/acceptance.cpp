// Acceptance run: one PASS/FAIL line per criterion.
//
// MDG_ACCEPT_ONLY=1,3,8 restricts the run to the listed criteria.
// MDG_ACCEPT_FULL=1 runs the planewave study on every mesh up to E = 2304;
// by default the E = 2304 meshes are skipped and criterion 4 cannot pass.
#include "mortar_dg/experiment.hpp"
#include "mortar_dg/spectral_probe.hpp"
#include "mortar_dg/time_integration.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

using namespace mdg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string fix(double x, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

void info(const std::string& s) { std::printf("    %s\n", s.c_str()); std::fflush(stdout); }

MeshSpec box36(bool refined = true, std::int64_t frame_seed = -1) {
  MeshSpec s;
  s.base = {2, 2, 2};
  if (refined) s.refined = alternating_cells(s.base);
  s.frame_seed = frame_seed;
  return s;
}

// ---------------------------------------------------------------------------
Outcome operator_invariants() {
  Outcome out;
  double sbp = 0, comm = 0, exact = 0, half = 0, recompose = 0, constant = 0;
  for (int N = 1; N <= 8; ++N) {
    const LglRule rule = lgl_rule(N);
    const Basis1D b = diff_matrix(rule);
    const int n = N + 1;
    // M D + D^T M = diag(-1, 0, ..., 0, 1).
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double q = rule.weights[i] * b.D(i, j) + b.D(j, i) * rule.weights[j];
        if (i == j && i == 0) q += 1.0;
        if (i == j && i == N) q -= 1.0;
        sbp = std::max(sbp, std::abs(q));
      }
    // Quadrature exactness through degree 2N - 1.
    for (int k = 0; k <= 2 * N - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
      exact = std::max(exact, std::abs(s - (k % 2 == 0 ? 2.0 / (k + 1) : 0.0)));
    }
    // Derivatives along different axes commute.
    const TensorOps3D ops(N);
    const State f = random_state(1, ops.volume_size(), 40 + N);
    std::vector<double> a(ops.volume_size()), c(ops.volume_size()), d1(ops.volume_size()), d2(ops.volume_size());
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) {
        ops.derivative(f.data.data(), a.data(), p);
        ops.derivative(a.data(), d1.data(), q);
        ops.derivative(f.data.data(), c.data(), q);
        ops.derivative(c.data(), d2.data(), p);
        for (int i = 0; i < ops.volume_size(); ++i) comm = std::max(comm, std::abs(d1[i] - d2[i]) / (N * N * N));
      }
    // Half-interval projections: P_b = 1/2 M^{-1} I_b^T M, and the split pair
    // recomposes the identity.
    const HalfOps1D h = build_half_ops(N);
    const Mat Minv = h.M.inverse();
    const Mat pb = 0.5 * Minv * h.Ib.transpose() * h.M;
    const Mat pt = 0.5 * Minv * h.It.transpose() * h.M;
    half = std::max({half, (pb - h.Pb).cwiseAbs().maxCoeff(), (pt - h.Pt).cwiseAbs().maxCoeff()});
    const Mat id = h.Pb * h.Ib + h.Pt * h.It - Mat::Identity(n, n);
    recompose = std::max(recompose, id.cwiseAbs().maxCoeff());
    // Integral form with a Gauss rule: q lives on the lower half with its own
    // parameter s, so int phi P_b q dx equals 1/2 int phi((s - 1) / 2) q(s) ds.
    std::vector<double> gx, gw;
    gauss_legendre(2 * n, gx, gw);
    const State qv = random_state(1, n, 70 + N), phi = random_state(1, n, 90 + N);
    Eigen::Map<const Eigen::VectorXd> qe(qv.data.data(), n), pe(phi.data.data(), n);
    const Eigen::VectorXd pq = h.Pb * qe;
    std::vector<double> full(gx.size()), lower(gx.size());
    for (std::size_t i = 0; i < gx.size(); ++i) {
      full[i] = gx[i];
      lower[i] = 0.5 * (gx[i] - 1.0);
    }
    const Mat If = interp_matrix(rule.nodes, full), Il = interp_matrix(rule.nodes, lower);
    const Eigen::VectorXd phf = If * pe, pqf = If * pq, phl = Il * pe, ql = If * qe;
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      lhs += gw[i] * phf[i] * pqf[i];
      rhs += 0.5 * gw[i] * phl[i] * ql[i];
    }
    half = std::max(half, std::abs(lhs - rhs));
    // Every mortar transfer maps constants to constants.
    if (N <= 5) {
      const Mesh mesh = build_adapted_box(box36(true, 5));
      for (MortarKind kind : {MortarKind::FullSide, MortarKind::SplitSide}) {
        const MortarSet ms = build_mortars(mesh, kind);
        const MortarOperators mops(ops, ms);
        const std::vector<double> ones(ops.face_size(), 1.0);
        std::vector<double> m(ops.face_size());
        for (int k = 0; k < ms.num_mortars(); ++k) {
          if (ms.mortars[k].plus.empty()) continue;
          mops.to_mortar(k, -1, ones.data(), m.data());
          for (double x : m) constant = std::max(constant, std::abs(x - 1.0));
          // Hanging plus sides each cover part of the mortar; their sum is the constant.
          std::fill(m.begin(), m.end(), 0.0);
          for (int s = 0; s < static_cast<int>(ms.mortars[k].plus.size()); ++s)
            mops.to_mortar(k, s, ones.data(), m.data(), true);
          for (double x : m) constant = std::max(constant, std::abs(x - 1.0));
        }
      }
    }
  }
  const double tol = 1e-12;
  out.require(sbp <= tol, "SBP " + sci(sbp));
  out.require(comm <= tol, "derivative commutation " + sci(comm));
  out.require(exact <= tol, "LGL exactness " + sci(exact));
  out.require(half <= tol, "half-interval projection identities " + sci(half));
  out.require(recompose <= tol, "split-recompose " + sci(recompose));
  out.require(constant <= tol, "constant transfer " + sci(constant));
  return out;
}

// ---------------------------------------------------------------------------
Outcome divergence_theorem() {
  Outcome out;
  ExperimentConfig c;
  c.kind = ExperimentKind::Divcheck;
  c.mesh = box36();
  c.transform = "skew";
  c.orders = {2, 3, 4, 5};
  c.treatment = GeometryTreatment::ContinuousMetric;
  const RunReport cm = run_experiment(c);
  double worst = 0.0;
  for (const auto& r : cm.divcheck) {
    worst = std::max(worst, r.residual);
    info("continuous-metric N=" + std::to_string(r.order) + " " + mortar_kind_name(r.mortar) +
         ": residual " + sci(r.residual));
  }
  out.require(worst <= 1e-12, "continuous-metric residual " + sci(worst) + " <= 1e-12");
  c.treatment = GeometryTreatment::Interpolated;
  const RunReport ip = run_experiment(c);
  double least = INFINITY;
  for (const auto& r : ip.divcheck) least = std::min(least, r.residual);
  out.require(least > 1e-6, "interpolated residual " + sci(least) + " > 1e-6");
  return out;
}

// ---------------------------------------------------------------------------
Outcome energy_stability() {
  Outcome out;
  struct Case {
    const char* name;
    bool refined, skew, random;
    GeometryTreatment t;
    MortarKind kind;
    std::int64_t frames;
  };
  const Case cases[] = {
      {"conforming affine uniform", false, false, false, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, -1},
      {"conforming affine random", false, false, true, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, -1},
      {"conforming skew uniform", false, true, false, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, -1},
      {"conforming skew random", false, true, true, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, 3},
      {"nonconforming affine uniform", true, false, false, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, -1},
      {"nonconforming affine random split", true, false, true, GeometryTreatment::ContinuousMetric, MortarKind::SplitSide, -1},
      {"nonconforming skew uniform", true, true, false, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, -1},
      {"nonconforming skew random", true, true, true, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, 4},
      {"nonconforming skew random split", true, true, true, GeometryTreatment::ContinuousMetric, MortarKind::SplitSide, -1},
      {"nonconforming skew random interpolated", true, true, true, GeometryTreatment::Interpolated, MortarKind::FullSide, -1},
      {"nonconforming skew random watertight", true, true, true, GeometryTreatment::Watertight, MortarKind::SplitSide, -1},
  };
  double worst_upwind = -INFINITY, worst_central = 0.0;
  int states = 0;
  for (const Case& cs : cases)
    for (double alpha : {1.0, 0.0}) {
      ExperimentConfig c;
      c.kind = ExperimentKind::Stability;
      c.mesh = box36(cs.refined, cs.frames);
      c.transform = cs.skew ? "skew" : "affine";
      c.treatment = cs.t;
      c.mortar = cs.kind;
      c.alpha = alpha;
      c.order = 4;
      c.material = cs.random ? MaterialSpec::random_field(7) : MaterialSpec::uniform(2.0, 4.0, 3.0);
      c.samples = 100;
      c.probe = false;
      c.seed = 1000;
      const RunReport r = run_experiment(c);
      const double hi = r.summary["max_rate_over_energy"].get<double>();
      const double lo = r.summary["min_rate_over_energy"].get<double>();
      states += c.samples;
      if (alpha > 0.0)
        worst_upwind = std::max(worst_upwind, hi);
      else
        worst_central = std::max({worst_central, std::abs(hi), std::abs(lo)});
      info(std::string(cs.name) + " alpha=" + fix(alpha, 0) + ": rate/E in [" + sci(lo) + ", " + sci(hi) + "]");
    }
  out.require(worst_upwind <= 1e-12, "SFIM upwind max rate/E " + sci(worst_upwind) + " <= 1e-12 over " +
                                         std::to_string(states / 2) + " states");
  out.require(worst_central <= 1e-12, "SFIM central max |rate|/E " + sci(worst_central) + " <= 1e-12");

  auto probe = [](Scheme scheme, double alpha) {
    ExperimentConfig c;
    c.kind = ExperimentKind::Stability;
    c.mesh = box36();
    c.scheme = scheme;
    c.alpha = alpha;
    c.order = 4;
    c.samples = 0;
    c.probe = true;
    c.probe_iterations = 300;
    c.seed = 2;
    return run_experiment(c);
  };
  const RunReport afim = probe(Scheme::Afim, 0.0);
  const double growth = afim.summary["probe_witness_rate"].get<double>();
  info("AFIM central N=4 E=36: symmetrized max " + sci(afim.summary["probe_max_rate"].get<double>()) +
       ", witness rate " + sci(growth));
  out.require(growth >= 1e-3, "AFIM central witness growth " + sci(growth) + " >= 1e-3");
  for (double alpha : {0.0, 1.0}) {
    const RunReport sfim = probe(Scheme::Sfim, alpha);
    const double m = sfim.summary["probe_max_rate"].get<double>();
    const double w = sfim.summary["probe_witness_rate"].get<double>();
    info("SFIM alpha=" + fix(alpha, 0) + " N=4 E=36: symmetrized max " + sci(m) + ", witness rate " + sci(w));
    out.require(std::max(m, w) <= 1e-10, "SFIM alpha=" + fix(alpha, 0) + " symmetrized max " + sci(std::max(m, w)) + " <= 1e-10");
  }
  return out;
}

// ---------------------------------------------------------------------------
Outcome planewave_convergence() {
  Outcome out;
  // Published SFIM full-side errors for E = 36, 288, 2304 and their rates.
  const std::map<int, std::array<double, 3>> table = {
      {3, {1.9, 5.6e-2, 1.4e-3}}, {4, {1.1e-1, 1.3e-3, 4.3e-5}}, {5, {4.2e-3, 7.6e-5, 1.5e-6}}};
  const std::map<int, std::array<double, 2>> rates = {{3, {5.1, 5.3}}, {4, {6.5, 4.9}}, {5, {5.8, 5.7}}};
  const bool full = std::getenv("MDG_ACCEPT_FULL") && std::string(std::getenv("MDG_ACCEPT_FULL")) == "1";
  const std::map<int, int> levels = full ? std::map<int, int>{{3, 3}, {4, 3}, {5, 3}}
                                         : std::map<int, int>{{3, 2}, {4, 2}, {5, 1}};
  bool complete = true;
  for (const auto& [order, nlev] : levels) {
    ExperimentConfig c;
    c.kind = ExperimentKind::Convergence;
    c.mesh = box36();
    c.orders = {order};
    c.levels = nlev;
    c.cfl = 0.15;
    c.final_time = 20.0;
    c.time_unit = TimeUnit::ShearTransit;
    const RunReport r = run_experiment(c);
    if (r.diverged) {
      out.require(false, "N=" + std::to_string(order) + " diverged: " + r.message);
      continue;
    }
    if (nlev < 3) complete = false;
    for (std::size_t l = 0; l < r.table.size(); ++l) {
      const ConvergenceRow& row = r.table[l];
      const double ref = table.at(order)[l];
      const double ratio = row.error / ref;
      std::string line = "N=" + std::to_string(order) + " E=" + std::to_string(row.elements) + ": error " +
                         sci(row.error) + " (table " + sci(ref) + ", ratio " + fix(ratio) +
                         ", ratio after dividing by 2 pi " + fix(ratio / (2 * std::numbers::pi)) + ")";
      if (l > 0) {
        const double want = rates.at(order)[l - 1];
        line += ", rate " + fix(row.rate) + " (table " + fix(want, 1) + ")";
        out.require(std::abs(row.rate - want) <= 0.3,
                    "N=" + std::to_string(order) + " E=" + std::to_string(row.elements) + " rate " + fix(row.rate) +
                        " within 0.3 of " + fix(want, 1));
      }
      info(line + " [" + fix(row.seconds, 0) + " s]");
      out.require(ratio >= 0.5 && ratio <= 2.0,
                  "N=" + std::to_string(order) + " E=" + std::to_string(row.elements) + " error ratio " + fix(ratio) +
                      " within a factor 2");
    }
  }
  out.require(complete, complete ? "all meshes up to E=2304 run"
                                 : "E=2304 meshes run (skipped; set MDG_ACCEPT_FULL=1)");
  return out;
}

// ---------------------------------------------------------------------------
ExperimentConfig skew_run(ExperimentKind kind, GeometryTreatment t, MortarKind m, double alpha, double cfl) {
  ExperimentConfig c;
  c.kind = kind;
  c.mesh = box36();
  c.transform = "skew";
  c.treatment = t;
  c.mortar = m;
  c.alpha = alpha;
  c.order = 4;
  c.material = MaterialSpec::random_field(7);
  c.cfl = cfl;
  c.final_time = 10.0;
  c.time_unit = TimeUnit::ReferenceTime;
  c.snapshots = 20;
  c.seed = 1;
  return c;
}

std::string run_name(const ExperimentConfig& c) {
  return treatment_name(c.treatment) + " " + mortar_kind_name(c.mortar) + " alpha=" + fix(c.alpha, 0);
}

Outcome constant_preservation() {
  Outcome out;
  for (auto t : {GeometryTreatment::ContinuousMetric, GeometryTreatment::Interpolated, GeometryTreatment::Watertight})
    for (auto m : {MortarKind::FullSide, MortarKind::SplitSide})
      for (double alpha : {0.0, 1.0}) {
        if (t != GeometryTreatment::ContinuousMetric && (m != MortarKind::FullSide || alpha != 1.0)) continue;
        const ExperimentConfig c = skew_run(ExperimentKind::Constant, t, m, alpha, 0.3);
        const RunReport r = run_experiment(c);
        const double drift = r.summary["final_drift"].get<double>();
        info(run_name(c) + ": drift at 10 t0 " + sci(drift) + " [" + fix(r.seconds, 0) + " s]");
        if (t == GeometryTreatment::ContinuousMetric)
          out.require(!r.diverged && drift <= 1e-11, run_name(c) + " drift " + sci(drift) + " <= 1e-11");
        else
          out.require(!r.diverged && drift > 1e-8, run_name(c) + " drift " + sci(drift) + " > 1e-8");
      }
  return out;
}

// Shared by criteria 6 and 7: the upwind continuous-metric run is reused.
std::map<std::string, RunReport> conservation_runs;

Outcome conservation() {
  Outcome out;
  struct Run {
    GeometryTreatment t;
    MortarKind m;
    double alpha;
  };
  const Run runs[] = {
      {GeometryTreatment::ContinuousMetric, MortarKind::FullSide, 0.0},
      {GeometryTreatment::ContinuousMetric, MortarKind::FullSide, 1.0},
      {GeometryTreatment::ContinuousMetric, MortarKind::SplitSide, 0.0},
      {GeometryTreatment::ContinuousMetric, MortarKind::SplitSide, 1.0},
      {GeometryTreatment::Interpolated, MortarKind::SplitSide, 1.0},
      {GeometryTreatment::Interpolated, MortarKind::SplitSide, 0.0},
      {GeometryTreatment::Watertight, MortarKind::FullSide, 1.0},
  };
  for (const Run& run : runs) {
    const ExperimentConfig c = skew_run(ExperimentKind::Conserve, run.t, run.m, run.alpha, 0.3);
    RunReport r = run_experiment(c);
    const double total = r.summary["max_conservation_error"].get<double>();
    const double mom = r.summary["max_momentum_error"].get<double>();
    const double strain = r.summary["max_strain_error"].get<double>();
    info(run_name(c) + ": conservation " + sci(total) + ", momentum " + sci(mom) + ", strain " + sci(strain) +
         " [" + fix(r.seconds, 0) + " s]");
    out.require(!r.diverged && mom <= 1e-11, run_name(c) + " momentum " + sci(mom) + " <= 1e-11");
    if (run.t == GeometryTreatment::ContinuousMetric)
      out.require(total <= 1e-11, run_name(c) + " conservation " + sci(total) + " <= 1e-11");
    if (run.t == GeometryTreatment::Interpolated)
      out.require(strain >= 1e3 * mom, run_name(c) + " strain/momentum " + sci(strain / mom) + " >= 1e3");
    conservation_runs[run_name(c)] = std::move(r);
  }
  return out;
}

Outcome long_time_energy() {
  Outcome out;
  const std::string upwind_key = "continuous-metric full-side alpha=1";
  if (!conservation_runs.count(upwind_key)) {
    const ExperimentConfig c =
        skew_run(ExperimentKind::Longtime, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, 1.0, 0.3);
    conservation_runs[upwind_key] = run_experiment(c);
  }
  const RunReport& up = conservation_runs[upwind_key];
  const auto& tr = up.energy_trace;
  const double e0 = tr.front(), half = tr[tr.size() / 2], end = tr.back();
  const double loss = (e0 - end) / e0;
  const double late = (half - end) / e0;
  info("upwind: energy loss " + fix(100 * loss, 1) + "% by 10 t0, " + fix(100 * late, 3) + "% of it after 5 t0");
  out.require(loss >= 0.10 && loss < 1.0, "upwind loss " + fix(100 * loss, 1) + "% is double-digit");
  out.require(late <= 0.1 * loss, "upwind plateau: late loss " + sci(late) + " <= 10% of total");
  out.require(up.summary["energy_increases"].get<int>() == 0, "upwind energy never increases");

  const ExperimentConfig c =
      skew_run(ExperimentKind::Longtime, GeometryTreatment::ContinuousMetric, MortarKind::FullSide, 0.0, 0.1);
  const RunReport central = run_experiment(c);
  const double closs = central.summary["relative_energy_loss"].get<double>();
  info("central (cfl 0.1): relative energy loss " + sci(closs) + " [" + fix(central.seconds, 0) + " s]");
  out.require(!central.diverged && std::abs(closs) <= 1e-5, "central loss " + sci(closs) + " <= 1e-5");
  return out;
}

// ---------------------------------------------------------------------------
Outcome integrator_order() {
  Outcome out;
  // Linear oracles: decay y' = -y and rotation y'' = -y, both to t = 2.
  auto slope = [](const VectorRhs& f, std::vector<double> y0,
                  const std::function<std::vector<double>(double)>& exact) {
    std::vector<double> lx, ly;
    for (int steps : {20, 40, 80, 160}) {
      std::vector<double> y = y0;
      LsrkIntegrator lsrk;
      const double dt = 2.0 / steps;
      for (int s = 0; s < steps; ++s) lsrk.step(y, s * dt, dt, f);
      const auto ex = exact(2.0);
      double err = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) err = std::max(err, std::abs(y[i] - ex[i]));
      lx.push_back(std::log(dt));
      ly.push_back(std::log(err));
    }
    const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 4; ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
  };
  const double decay = slope([](double, const std::vector<double>& y, std::vector<double>& d) { d = {-y[0]}; },
                             {1.0}, [](double t) { return std::vector<double>{std::exp(-t)}; });
  const double rotation = slope(
      [](double, const std::vector<double>& y, std::vector<double>& d) { d = {y[1], -y[0]}; }, {1.0, 0.0},
      [](double t) { return std::vector<double>{std::cos(t), -std::sin(t)}; });
  out.require(decay >= 3.8 && decay <= 4.2, "decay slope " + fix(decay, 3));
  out.require(rotation >= 3.8 && rotation <= 4.2, "rotation slope " + fix(rotation, 3));
  return out;
}

}  // namespace

int main() {
  std::set<int> only;
  if (const char* env = std::getenv("MDG_ACCEPT_ONLY")) {
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
  }
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "operator invariants", operator_invariants},
      {2, "discrete divergence theorem", divergence_theorem},
      {3, "energy stability", energy_stability},
      {4, "planewave convergence", planewave_convergence},
      {5, "constant preservation", constant_preservation},
      {6, "conservation", conservation},
      {7, "long-time energy", long_time_energy},
      {8, "time integrator order", integrator_order},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::printf("CRITERION %d: %s\n", c.id, c.name);
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.0f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
