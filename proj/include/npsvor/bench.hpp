#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "npsvor/eval.hpp"
#include "npsvor/model.hpp"
#include "npsvor/ordinal.hpp"
#include "npsvor/sparse.hpp"

namespace npsvor {

// Process CPU time in seconds.
double cpu_seconds();

// Sparse rows with geometric nnz and unit L2 norm; ranks come from balanced
// quantiles of a noisy linear score under a hidden Gaussian weight vector.
struct SyntheticConfig {
  int version = 1;
  std::size_t n = 10000;
  std::size_t m = 2000;
  double avg_nnz = 30.0;
  int ranks = 5;
  double noise = 0.1;  // std of the score noise, relative to the score std
  double bias = 1.0;   // <= 0 disables the bias column
  std::uint64_t seed = 1;

  static SyntheticConfig from_json(const nlohmann::json& j);
  static SyntheticConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

SparseDataset generate_synthetic(const SyntheticConfig& cfg);

// ---- convergence -----------------------------------------------------------

struct TraceSample {
  int sweep = 0;
  double seconds = 0.0;  // solver CPU time, objective evaluation excluded
  double objective = 0.0;
  double relative = 0.0;  // (f - f*) / |f*|
};

struct ConvergenceTrace {
  std::string solver;
  int rank = 0;
  std::vector<TraceSample> samples;
  SolveSummary summary;

  // First sample at or below `target`; nullptr if never reached.
  const TraceSample* first_below(double target) const;
};

struct ConvergenceOptions {
  int rank = 1;
  double reference_eps_stop = 1.0e-10;
  int reference_max_sweeps = 20000;
  double trace_eps_stop = 1.0e-6;
  int trace_max_sweeps = 5000;
};

struct ConvergenceResult {
  double f_star = 0.0;  // smallest objective seen by any run
  bool reference_converged = false;
  ConvergenceTrace dcd1;
  ConvergenceTrace dcd2;
};

ConvergenceResult bench_convergence(const SparseDataset& data, const SolverConfig& cfg,
                                    const ConvergenceOptions& options);

// ---- epsilon sensitivity ---------------------------------------------------

struct EpsilonRow {
  double eps = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  double seconds = 0.0;  // median training CPU time over the repeats, interleaved across the grid
  std::size_t support_vectors = 0;
  double mae_ratio = 1.0;
  double mse_ratio = 1.0;
  double time_ratio = 1.0;
  double sv_ratio = 1.0;
};

// The grid must contain 0; ratios are relative to that row.
std::vector<EpsilonRow> bench_epsilon(const SparseDataset& train, const SparseDataset& test,
                                      const std::vector<double>& eps_grid,
                                      const SolverConfig& cfg, int repeats = 1);

// ---- predictors ------------------------------------------------------------

struct PredictorComparison {
  EvalReport old_rule;
  EvalReport new_rule;
};

PredictorComparison compare_predictors(const OrdinalModel& model, const SparseDataset& test);
PredictorComparison bench_predictors(const SparseDataset& train, const SparseDataset& test,
                                     const SolverConfig& cfg);

// Three elongated 2-D Gaussian clusters, one per rank, whose long axes are
// tilted so the fitted proximal lines are far from parallel. The probes are
// members of ranks 1 and 3 that fool the nearest-line rule for the model
// trained on sample(train_seed).
struct ClusterSpec {
  std::array<double, 2> mean;
  double angle = 0.0;  // long axis, radians
  double sd_long = 1.0;
  double sd_short = 0.1;
};

struct Probe {
  std::array<double, 2> point;
  int rank = 0;
};

struct PredictorGeometry {
  std::array<ClusterSpec, 3> clusters;
  std::size_t per_rank = 60;
  double bias = 1.0;
  std::uint64_t train_seed = 1;
  std::array<Probe, 2> probes;

  static PredictorGeometry standard();
  SparseDataset sample(std::uint64_t seed) const;
  SparseVector probe_row(const Probe& probe) const;
};

// ---- method comparison -----------------------------------------------------

struct NamedSplit {
  std::string name;
  SparseDataset train;
  SparseDataset test;
};

struct MethodResult {
  std::string dataset;
  std::string method;
  double C1 = 0.0;
  double C2 = 0.0;
  double cv_mae = 0.0;
  EvalReport test;
  double train_seconds = 0.0;
};

struct MethodSpec {
  SolverKind kind = SolverKind::npsvor_dcd2;
  Predictor predictor = Predictor::new_rule;
  bool separate_c2 = false;  // NPSVOR only: search C1 x C2 instead of C1 = C2
};

// Grid search on train, retrain at the best cell, evaluate on test.
MethodResult run_method(const NamedSplit& split, const MethodSpec& method,
                        const Log2Range& grid, const SolverConfig& cfg, int folds,
                        std::uint64_t seed, int jobs);
std::vector<MethodResult> bench_methods(const std::vector<NamedSplit>& splits,
                                        const std::vector<MethodSpec>& methods,
                                        const Log2Range& grid, const SolverConfig& cfg, int folds,
                                        std::uint64_t seed, int jobs);

// ---- output ----------------------------------------------------------------

nlohmann::json to_json(const ConvergenceTrace& trace);
nlohmann::json to_json(const EpsilonRow& row);
nlohmann::json to_json(const MethodResult& result);

std::string format_convergence(const ConvergenceResult& result, double target);
std::string format_epsilon(const std::vector<EpsilonRow>& rows);
std::string format_predictors(const PredictorComparison& cmp);
std::string format_methods(const std::vector<MethodResult>& results);
// "seconds relative" pairs, one per line.
std::string trace_columns(const ConvergenceTrace& trace);

}  // namespace npsvor
