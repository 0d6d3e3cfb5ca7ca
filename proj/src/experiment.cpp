#include "mortar_dg/experiment.hpp"

#include "mortar_dg/spectral_probe.hpp"
#include "mortar_dg/time_integration.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace mdg {

namespace {

using json = nlohmann::json;

template <class Enum>
struct Named {
  Enum value;
  const char* name;
};

constexpr Named<ExperimentKind> kKinds[] = {
    {ExperimentKind::Convergence, "convergence"}, {ExperimentKind::Stability, "stability"},
    {ExperimentKind::Longtime, "longtime"},       {ExperimentKind::Conserve, "conserve"},
    {ExperimentKind::Constant, "constant"},       {ExperimentKind::Divcheck, "divcheck"},
};

constexpr Named<TimeUnit> kUnits[] = {
    {TimeUnit::Absolute, "absolute"},
    {TimeUnit::ReferenceTime, "t0"},
    {TimeUnit::ShearTransit, "shear-transit"},
};

template <class Enum, std::size_t K>
Enum lookup(const Named<Enum> (&table)[K], const std::string& name, const char* what) {
  for (const auto& entry : table)
    if (name == entry.name) return entry.value;
  std::string msg = std::string("unknown ") + what + " '" + name + "' (expected";
  for (const auto& entry : table) msg += std::string(" ") + entry.name;
  throw std::invalid_argument(msg + ")");
}

template <class Enum, std::size_t K>
std::string lookup_name(const Named<Enum> (&table)[K], Enum v) {
  for (const auto& entry : table)
    if (entry.value == v) return entry.name;
  throw std::invalid_argument("unnamed enum value");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class T>
T get_or(const json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("config: " + msg);
}

json mesh_to_json(const MeshSpec& m) {
  return json{{"base", m.base},
              {"refined", m.refined},
              {"periodic", m.periodic},
              {"frame_seed", m.frame_seed}};
}

MeshSpec mesh_from_json(const json& j) {
  MeshSpec m;
  m.base = get_or(j, "base", m.base);
  for (int g = 0; g < 3; ++g) require(m.base[g] >= 1, "mesh.base entries must be >= 1");
  if (j.contains("refined")) {
    if (j.at("refined").is_string()) {
      const auto pattern = j.at("refined").get<std::string>();
      if (pattern == "alternating")
        m.refined = alternating_cells(m.base);
      else
        require(pattern == "none", "mesh.refined must be a cell list, \"alternating\" or \"none\"");
    } else {
      m.refined = get_or(j, "refined", m.refined);
    }
  }
  for (const auto& c : m.refined)
    for (int g = 0; g < 3; ++g)
      require(c[g] >= 0 && c[g] < m.base[g], "mesh.refined cell outside the base grid");
  m.periodic = get_or(j, "periodic", m.periodic);
  m.frame_seed = get_or(j, "frame_seed", m.frame_seed);
  return m;
}

json material_to_json(const MaterialSpec& m) {
  if (!m.random) return json{{"kind", "uniform"}, {"rho", m.rho}, {"lambda", m.lambda}, {"mu", m.mu}};
  return json{{"kind", "random"},
              {"seed", m.seed},
              {"rho_range", m.ranges.rho},
              {"lambda_range", m.ranges.lambda},
              {"mu_range", m.ranges.mu}};
}

MaterialSpec material_from_json(const json& j) {
  const auto kind = get_or<std::string>(j, "kind", "uniform");
  if (kind == "uniform") {
    const MaterialSpec m = MaterialSpec::uniform(get_or(j, "rho", 2.0), get_or(j, "lambda", 4.0),
                                                 get_or(j, "mu", 3.0));
    require(m.rho > 0 && m.mu > 0 && m.lambda + 2.0 * m.mu / 3.0 > 0,
            "material must have rho > 0, mu > 0 and a positive bulk modulus");
    return m;
  }
  require(kind == "random", "material.kind must be \"uniform\" or \"random\"");
  MaterialRanges r;
  r.rho = get_or(j, "rho_range", r.rho);
  r.lambda = get_or(j, "lambda_range", r.lambda);
  r.mu = get_or(j, "mu_range", r.mu);
  require(r.rho[0] > 0 && r.rho[0] <= r.rho[1] && r.mu[0] > 0 && r.mu[0] <= r.mu[1] &&
              r.lambda[0] <= r.lambda[1] && r.lambda[0] + 2.0 * r.mu[0] / 3.0 > 0,
          "material ranges must be ordered and give positive moduli");
  return MaterialSpec::random_field(get_or<std::uint64_t>(j, "seed", 0), r);
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) { return lookup(kKinds, name, "experiment"); }
std::string experiment_kind_name(ExperimentKind k) { return lookup_name(kKinds, k); }

MortarKind parse_mortar_kind(const std::string& name) {
  if (name == "full-side") return MortarKind::FullSide;
  if (name == "split-side") return MortarKind::SplitSide;
  throw std::invalid_argument("unknown mortar kind '" + name + "' (expected full-side split-side)");
}

std::string mortar_kind_name(MortarKind k) { return k == MortarKind::FullSide ? "full-side" : "split-side"; }

ProblemSpec ExperimentConfig::problem_spec(int order_override) const {
  ProblemSpec s;
  s.mesh = mesh;
  s.order = order_override > 0 ? order_override : order;
  s.transform = transform == "skew" ? TransformSpec::skew(amplitude) : TransformSpec::affine_box(lo, hi);
  s.treatment = treatment;
  s.mortar_kind = mortar;
  s.material = material;
  s.scheme = scheme;
  s.alpha = alpha;
  return s;
}

double ExperimentConfig::resolve_final_time(const MaterialField& mat) const {
  switch (time_unit) {
    case TimeUnit::Absolute: return final_time;
    case TimeUnit::ReferenceTime: return final_time * reference_time();
    case TimeUnit::ShearTransit: return final_time / mat.min_cs();
  }
  return final_time;
}

json ExperimentConfig::to_json() const {
  json j{{"experiment", experiment_kind_name(kind)},
         {"mesh", mesh_to_json(mesh)},
         {"geometry", treatment_name(treatment)},
         {"scheme", scheme_name(scheme)},
         {"mortar", mortar_kind_name(mortar)},
         {"alpha", alpha},
         {"order", order},
         {"orders", orders},
         {"levels", levels},
         {"material", material_to_json(material)},
         {"cfl", cfl},
         {"final_time", final_time},
         {"time_unit", lookup_name(kUnits, time_unit)},
         {"fixed_steps", fixed_steps},
         {"snapshots", snapshots},
         {"seed", seed},
         {"initial_range", initial_range},
         {"samples", samples},
         {"probe", probe},
         {"probe_iterations", probe_iterations},
         {"output", output}};
  if (transform == "skew")
    j["transform"] = json{{"kind", "skew"}, {"amplitude", amplitude}};
  else
    j["transform"] = json{{"kind", "affine"}, {"lo", lo}, {"hi", hi}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  require(j.is_object(), "top level must be an object");
  static const std::vector<std::string> known = {
      "experiment", "mesh",  "transform", "geometry", "scheme",      "mortar",   "alpha",
      "order",      "orders", "levels",   "material", "cfl",         "final_time", "time_unit",
      "fixed_steps", "snapshots", "seed", "initial_range",  "samples",  "probe",       "probe_iterations", "output"};
  for (const auto& item : j.items())
    require(std::find(known.begin(), known.end(), item.key()) != known.end(),
            "unknown key '" + item.key() + "'");
  require(j.contains("experiment"), "missing key 'experiment'");

  ExperimentConfig c;
  c.kind = parse_experiment_kind(j.at("experiment").get<std::string>());
  if (j.contains("mesh")) c.mesh = mesh_from_json(j.at("mesh"));
  if (j.contains("transform")) {
    const json& t = j.at("transform");
    c.transform = get_or<std::string>(t, "kind", "affine");
    require(c.transform == "affine" || c.transform == "skew", "transform.kind must be affine or skew");
    c.lo = get_or(t, "lo", c.lo);
    c.hi = get_or(t, "hi", c.hi);
    c.amplitude = get_or(t, "amplitude", c.amplitude);
    for (int g = 0; g < 3; ++g) require(c.hi[g] > c.lo[g], "transform.hi must exceed transform.lo");
  }
  c.treatment = parse_treatment(get_or<std::string>(j, "geometry", treatment_name(c.treatment)));
  c.scheme = parse_scheme(get_or<std::string>(j, "scheme", scheme_name(c.scheme)));
  c.mortar = parse_mortar_kind(get_or<std::string>(j, "mortar", mortar_kind_name(c.mortar)));
  c.alpha = get_or(j, "alpha", c.alpha);
  require(c.alpha >= 0.0 && c.alpha <= 1.0, "alpha must lie in [0, 1]");
  c.order = get_or(j, "order", c.order);
  c.orders = get_or(j, "orders", c.orders);
  for (int n : c.order_list()) require(n >= 1 && n <= 12, "orders must lie in 1..12");
  c.levels = get_or(j, "levels", c.levels);
  require(c.levels >= 1, "levels must be >= 1");
  if (j.contains("material")) c.material = material_from_json(j.at("material"));
  c.cfl = get_or(j, "cfl", c.cfl);
  require(c.cfl > 0.0, "cfl must be positive");
  c.final_time = get_or(j, "final_time", c.final_time);
  require(c.final_time >= 0.0, "final_time must be non-negative");
  c.time_unit = lookup(kUnits, get_or<std::string>(j, "time_unit", lookup_name(kUnits, c.time_unit)),
                       "time unit");
  c.fixed_steps = get_or(j, "fixed_steps", c.fixed_steps);
  require(c.fixed_steps >= 0, "fixed_steps must be >= 0");
  c.snapshots = get_or(j, "snapshots", c.snapshots);
  require(c.snapshots >= 1, "snapshots must be >= 1");
  c.seed = get_or(j, "seed", c.seed);
  c.initial_range = get_or(j, "initial_range", c.initial_range);
  require(c.initial_range[0] < c.initial_range[1], "initial_range must be increasing");
  c.samples = get_or(j, "samples", c.samples);
  require(c.samples >= 0, "samples must be >= 0");
  c.probe = get_or(j, "probe", c.probe);
  c.probe_iterations = get_or(j, "probe_iterations", c.probe_iterations);
  require(c.probe_iterations >= 1, "probe_iterations must be >= 1");
  c.output = get_or(j, "output", c.output);
  if (c.kind == ExperimentKind::Convergence)
    require(!c.material.random, "convergence runs need a uniform material for the planewave");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

json RunReport::to_json() const {
  json j{{"experiment", experiment_kind_name(config.kind)},
         {"config", config.to_json()},
         {"seed", config.seed},
         {"summary", summary},
         {"violations", violations},
         {"diverged", diverged},
         {"message", message},
         {"seconds", seconds}};
  if (diverged) j["failure_time"] = failure_time;
  if (!table.empty()) {
    json rows = json::array();
    for (const auto& r : table)
      rows.push_back({{"order", r.order}, {"elements", r.elements}, {"error", r.error},
                      {"rate", std::isnan(r.rate) ? json(nullptr) : json(r.rate)}});
    j["convergence"] = rows;
  }
  return j;
}

namespace {

State initial_state(const ExperimentConfig& c, const Problem& p) {
  const int E = p.mesh().num_elements(), nv = p.ops().volume_size();
  if (c.kind == ExperimentKind::Constant) return constant_state(E, nv);
  return random_state(E, nv, c.seed, c.initial_range[0], c.initial_range[1]);
}

// Time integration with snapshots, shared by longtime, conserve and constant.
void run_evolution(const ExperimentConfig& c, RunReport& rep) {
  Problem p(c.problem_spec());
  const State q0 = initial_state(c, p);
  State q = q0;
  const double tf = c.resolve_final_time(p.material());
  const double dt_max = c.fixed_steps > 0 ? tf / c.fixed_steps
                                          : stable_dt(p.geometry(), p.material(), c.order, c.cfl);
  const int steps = tf > 0.0 ? static_cast<int>(std::ceil(tf / dt_max - 1e-12)) : 0;
  const int every = std::max(1, steps / c.snapshots);

  auto snap = [&](const State& s, int step) {
    Snapshot sn;
    sn.step = step;
    sn.t = s.t;
    sn.energy = p.energy(s);
    const ConservationError ce = conservation_error(s, q0, p.material(), p.geometry());
    sn.momentum_error = ce.momentum_sum();
    sn.strain_error = ce.strain_sum();
    sn.conservation_error = ce.total();
    sn.drift = normalized_drift(s, q0, p.material(), p.geometry().wJ);
    rep.snapshots.push_back(sn);
  };
  snap(q, 0);
  rep.energy_trace.push_back(p.energy(q));
  double last_t = 0.0;
  try {
    integrate(q, tf, dt_max, [&](const State& a, State& b) { p.op().rhs(a, b); },
              [&](const State& s, int step) {
                last_t = s.t;
                rep.energy_trace.push_back(p.energy(s));
                if (step % every == 0 || step == steps) snap(s, step);
              });
  } catch (const std::runtime_error& e) {
    rep.diverged = true;
    rep.failure_time = last_t;
    rep.message = e.what();
  }

  const double e0 = rep.energy_trace.front();
  int increases = 0;
  for (std::size_t i = 1; i < rep.energy_trace.size(); ++i)
    if (rep.energy_trace[i] > rep.energy_trace[i - 1] + 1e-12 * rep.energy_trace[i - 1]) ++increases;
  double max_cons = 0, max_mom = 0, max_strain = 0, max_drift = 0;
  for (const auto& s : rep.snapshots) {
    max_cons = std::max(max_cons, s.conservation_error);
    max_mom = std::max(max_mom, s.momentum_error);
    max_strain = std::max(max_strain, s.strain_error);
    max_drift = std::max(max_drift, s.drift);
  }
  const Snapshot& last = rep.snapshots.back();
  rep.summary = json{{"elements", p.mesh().num_elements()},
                     {"final_time", tf},
                     {"steps", steps},
                     {"dt", steps > 0 ? tf / steps : 0.0},
                     {"initial_energy", e0},
                     {"final_energy", last.energy},
                     {"relative_energy_loss", (e0 - last.energy) / e0},
                     {"energy_increases", increases},
                     {"final_conservation_error", last.conservation_error},
                     {"final_momentum_error", last.momentum_error},
                     {"final_strain_error", last.strain_error},
                     {"final_drift", last.drift},
                     {"max_conservation_error", max_cons},
                     {"max_momentum_error", max_mom},
                     {"max_strain_error", max_strain},
                     {"max_drift", max_drift},
                     {"clamped_impedances", p.op().clamped_impedances()}};
  if (c.scheme == Scheme::Sfim && c.alpha > 0.0 && increases > 0)
    rep.violations.push_back("energy increased at " + std::to_string(increases) +
                             " steps of an upwind SFIM run");
}

void run_convergence(const ExperimentConfig& c, RunReport& rep) {
  const MaterialSpec& m = c.material;
  const ExactSolution exact = [m](const Vec3& x, double t) {
    return planewave_exact(x, t, m.rho, m.lambda, m.mu);
  };
  for (int order : c.order_list()) {
    ExperimentConfig level_cfg = c;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int level = 0; level < c.levels; ++level) {
      const auto t0 = std::chrono::steady_clock::now();
      Problem p(level_cfg.problem_spec(order));
      State q = sample_solution(p.geometry(), exact, 0.0);
      const double tf = c.resolve_final_time(p.material());
      const double dt_max = c.fixed_steps > 0 ? tf / c.fixed_steps
                                              : stable_dt(p.geometry(), p.material(), order, c.cfl);
      ConvergenceRow row;
      row.order = order;
      row.elements = p.mesh().num_elements();
      row.dofs = q.data.size();
      try {
        row.steps = integrate(q, tf, dt_max, [&](const State& a, State& b) { p.op().rhs(a, b); });
      } catch (const std::runtime_error& e) {
        rep.diverged = true;
        rep.failure_time = q.t;
        rep.message = "N=" + std::to_string(order) + " E=" + std::to_string(row.elements) + ": " + e.what();
        return;
      }
      row.dt = row.steps > 0 ? tf / row.steps : 0.0;
      row.error = l2_energy_error(q, exact, p.material(), p.geometry());
      row.rate = level == 0 ? std::numeric_limits<double>::quiet_NaN() : convergence_rate(prev, row.error);
      row.seconds = seconds_since(t0);
      prev = row.error;
      rep.table.push_back(row);
      std::cerr << "convergence N=" << order << " E=" << row.elements << " error=" << row.error
                << " rate=" << row.rate << " (" << row.seconds << " s)\n";
      level_cfg.mesh = level_cfg.mesh.bisected();
    }
  }
  rep.summary = json{{"rows", rep.table.size()}};
}

void run_stability(const ExperimentConfig& c, RunReport& rep) {
  Problem p(c.problem_spec());
  const int E = p.mesh().num_elements(), nv = p.ops().volume_size();
  State dq = p.make_state();
  double max_ratio = -std::numeric_limits<double>::infinity();
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < c.samples; ++i) {
    StabilitySample s;
    s.seed = c.seed + static_cast<std::uint64_t>(i);
    const State q = random_state(E, nv, s.seed);
    p.op().rhs(q, dq);
    s.energy = p.energy(q);
    s.rate = p.op().energy_rate(q, dq);
    max_ratio = std::max(max_ratio, s.rate / s.energy);
    min_ratio = std::min(min_ratio, s.rate / s.energy);
    rep.samples.push_back(s);
  }
  rep.summary = json{{"elements", E}, {"samples", c.samples}};
  if (c.samples > 0) {
    rep.summary["max_rate_over_energy"] = max_ratio;
    rep.summary["min_rate_over_energy"] = min_ratio;
  }
  if (c.probe) {
    const auto A = assemble_operator(p.op(), E, nv);
    const GrowthBound g = symmetrized_growth(p.op(), A, E, nv, c.seed, c.probe_iterations);
    rep.summary["probe_max_rate"] = g.max_rate;
    rep.summary["probe_min_rate"] = g.min_rate;
    rep.summary["probe_witness_rate"] = g.witness_rate;
    rep.summary["probe_iterations"] = g.iterations;
    if (c.scheme == Scheme::Sfim && g.witness_rate > 1e-10)
      rep.violations.push_back("symmetrized probe found SFIM energy growth");
  }
  if (c.scheme == Scheme::Sfim && c.samples > 0) {
    const bool ok = c.alpha > 0.0 ? max_ratio <= 1e-12
                                  : std::max(std::abs(max_ratio), std::abs(min_ratio)) <= 1e-12;
    if (!ok) rep.violations.push_back("SFIM energy rate outside the 1e-12 E bound");
  }
}

void run_divcheck(const ExperimentConfig& c, RunReport& rep) {
  double worst = 0.0;
  for (int order : c.order_list())
    for (MortarKind kind : {MortarKind::FullSide, MortarKind::SplitSide}) {
      ExperimentConfig k = c;
      k.mortar = kind;
      Problem p(k.problem_spec(order));
      DivcheckRow row;
      row.order = order;
      row.mortar = kind;
      row.residual = discrete_divergence_residual(p.ops(), p.geometry(), p.mortars(), p.mortar_ops());
      row.freestream = freestream_residual(p.ops(), p.geometry());
      worst = std::max(worst, row.residual);
      rep.divcheck.push_back(row);
    }
  rep.summary = json{{"max_residual", worst}};
  if (c.treatment == GeometryTreatment::ContinuousMetric && worst > 1e-12)
    rep.violations.push_back("discrete divergence residual above 1e-12");
}

void write_csv_header(std::ofstream& out, const char* header) {
  out << std::setprecision(17) << header << '\n';
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config = config;
  switch (config.kind) {
    case ExperimentKind::Convergence: run_convergence(config, rep); break;
    case ExperimentKind::Stability: run_stability(config, rep); break;
    case ExperimentKind::Divcheck: run_divcheck(config, rep); break;
    case ExperimentKind::Longtime:
    case ExperimentKind::Conserve:
    case ExperimentKind::Constant: run_evolution(config, rep); break;
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

void write_report(const RunReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    out << rep.to_json().dump(2) << '\n';
  }
  if (!rep.snapshots.empty()) {
    std::ofstream out(dir / "snapshots.csv");
    write_csv_header(out, "step,time,energy,momentum_error,strain_error,conservation_error,drift");
    for (const auto& s : rep.snapshots)
      out << s.step << ',' << s.t << ',' << s.energy << ',' << s.momentum_error << ','
          << s.strain_error << ',' << s.conservation_error << ',' << s.drift << '\n';
  }
  if (!rep.energy_trace.empty()) {
    std::ofstream out(dir / "energy.csv");
    write_csv_header(out, "step,energy");
    for (std::size_t i = 0; i < rep.energy_trace.size(); ++i) out << i << ',' << rep.energy_trace[i] << '\n';
  }
  if (!rep.table.empty()) {
    std::ofstream out(dir / "convergence.csv");
    write_csv_header(out, "order,elements,dofs,steps,dt,error,rate,seconds");
    for (const auto& r : rep.table) {
      out << r.order << ',' << r.elements << ',' << r.dofs << ',' << r.steps << ',' << r.dt << ','
          << r.error << ',';
      if (!std::isnan(r.rate)) out << r.rate;
      out << ',' << r.seconds << '\n';
    }
  }
  if (!rep.samples.empty()) {
    std::ofstream out(dir / "stability.csv");
    write_csv_header(out, "seed,energy,rate,rate_over_energy");
    for (const auto& s : rep.samples)
      out << s.seed << ',' << s.energy << ',' << s.rate << ',' << s.rate / s.energy << '\n';
  }
  if (!rep.divcheck.empty()) {
    std::ofstream out(dir / "divcheck.csv");
    write_csv_header(out, "order,mortar,residual,freestream");
    for (const auto& r : rep.divcheck)
      out << r.order << ',' << mortar_kind_name(r.mortar) << ',' << r.residual << ',' << r.freestream << '\n';
  }
}

}  // namespace mdg
