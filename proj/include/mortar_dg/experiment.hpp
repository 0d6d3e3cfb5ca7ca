// Experiment configuration, execution and report files behind the CLI.
#pragma once

#include "mortar_dg/diagnostics.hpp"
#include "mortar_dg/problem.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace mdg {

enum class ExperimentKind { Convergence, Stability, Longtime, Conserve, Constant, Divcheck };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind k);
MortarKind parse_mortar_kind(const std::string& name);
std::string mortar_kind_name(MortarKind k);

enum class TimeUnit { Absolute, ReferenceTime, ShearTransit };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Longtime;
  MeshSpec mesh;
  // "affine" (lo, hi) or "skew" (amplitude).
  std::string transform = "affine";
  Vec3 lo{0.0, 0.0, 0.0}, hi{1.0, 1.0, 1.0};
  double amplitude = 0.7853981633974483;
  GeometryTreatment treatment = GeometryTreatment::ContinuousMetric;
  Scheme scheme = Scheme::Sfim;
  MortarKind mortar = MortarKind::FullSide;
  double alpha = 1.0;
  int order = 4;
  // Convergence and divcheck loop over these; empty means {order}.
  std::vector<int> orders;
  // Convergence: number of meshes, each a bisection of the previous one.
  int levels = 3;
  MaterialSpec material = MaterialSpec::uniform(2.0, 4.0, 3.0);
  double cfl = 0.15;
  double final_time = 10.0;
  TimeUnit time_unit = TimeUnit::ReferenceTime;
  // Positive: take exactly this many steps instead of using cfl.
  int fixed_steps = 0;
  int snapshots = 50;
  std::uint64_t seed = 1;
  // Random initial states are uniform on [lo, hi) at every node.
  std::array<double, 2> initial_range{0.0, 1.0};
  // Stability: random states sampled, and whether to run the symmetrized probe.
  int samples = 100;
  bool probe = true;
  int probe_iterations = 300;
  std::string output = "out";

  ProblemSpec problem_spec(int order_override = -1) const;
  std::vector<int> order_list() const { return orders.empty() ? std::vector<int>{order} : orders; }
  // Final time in absolute units for the given material.
  double resolve_final_time(const MaterialField& mat) const;

  nlohmann::json to_json() const;
  // Validates every field; throws std::invalid_argument with the offending key.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct Snapshot {
  int step = 0;
  double t = 0.0;
  double energy = 0.0;
  double momentum_error = 0.0;
  double strain_error = 0.0;
  double conservation_error = 0.0;
  double drift = 0.0;
  double l2_error = -1.0;  // negative when no exact solution exists
};

struct ConvergenceRow {
  int order = 0;
  int elements = 0;
  std::size_t dofs = 0;
  int steps = 0;
  double dt = 0.0;
  double error = 0.0;
  double rate = 0.0;  // NaN on the coarsest mesh
  double seconds = 0.0;
};

struct StabilitySample {
  std::uint64_t seed = 0;
  double energy = 0.0;
  double rate = 0.0;
};

struct DivcheckRow {
  int order = 0;
  MortarKind mortar = MortarKind::FullSide;
  double residual = 0.0;
  double freestream = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<Snapshot> snapshots;
  std::vector<double> energy_trace;  // after every step, starting with the initial energy
  std::vector<ConvergenceRow> table;
  std::vector<StabilitySample> samples;
  std::vector<DivcheckRow> divcheck;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> violations;
  bool diverged = false;
  double failure_time = 0.0;
  std::string message;
  double seconds = 0.0;

  nlohmann::json to_json() const;
};

RunReport run_experiment(const ExperimentConfig& config);

// report.json plus the CSV tables that apply (snapshots.csv, energy.csv,
// convergence.csv, stability.csv, divcheck.csv).
void write_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace mdg
