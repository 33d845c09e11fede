#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "npsvor/dcd.hpp"
#include "npsvor/sparse.hpp"

// Linear nonparallel support vector ordinal regression: one proximal
// hyperplane w_k per rank, each trained independently on its dual.
namespace npsvor {

enum class Algorithm { dcd1, dcd2 };

// old: nearest hyperplane, argmin_k |w_k^T x|.
// new: ordered binary votes, 1 + sum_k [ (w_k + w_{k+1})^T x > 0 ].
enum class Predictor { old_rule, new_rule };

std::string_view to_string(Predictor p);
Predictor parse_predictor(std::string_view name);

struct SolverConfig {
  double C1 = 1.0;
  double C2 = 1.0;
  double eps = 0.1;       // insensitive zone for rank-k instances
  double eps_stop = 0.1;  // relative violation tolerance
  bool shrinking = true;
  int max_sweeps = 1000;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::dcd2;

  void validate() const;
  SweepLimits limits() const { return {eps_stop, max_sweeps, shrinking}; }
};

// Shape and label metadata shared by every model type.
struct ModelMeta {
  int p = 0;
  std::size_t m = 0;  // includes the bias column when bias is set
  std::optional<double> bias;
  std::vector<std::int64_t> label_map;

  static ModelMeta of(const SparseDataset& data);
  std::size_t raw_feature_count() const { return bias ? m - 1 : m; }
  std::int64_t original_label(int rank) const {
    return label_map.at(static_cast<std::size_t>(rank - 1));
  }
};

struct OrdinalModel {
  ModelMeta meta;
  std::vector<std::vector<double>> weights;  // p vectors of length m
  Predictor predictor = Predictor::new_rule;

  double score(int k, const SparseVector& x) const {
    return x.dot(weights.at(static_cast<std::size_t>(k - 1)));
  }
};

struct DualStateDCD2 {
  std::vector<double> alpha;  // merged duals, length n
  std::vector<double> w;
};

// alpha_minus/alpha_plus are indexed like `middle` (the rank-k instances);
// beta like `others`.
struct DualStateDCD1 {
  std::vector<std::size_t> middle;
  std::vector<std::size_t> others;
  std::vector<double> alpha_minus;
  std::vector<double> alpha_plus;
  std::vector<double> beta;
  std::vector<double> w;

  // alpha_plus - alpha_minus on I_k and beta elsewhere, indexed by instance.
  std::vector<double> merged(std::size_t n) const;
};

struct RankSolution2 {
  DualStateDCD2 state;
  SolveSummary summary;
};

struct RankSolution1 {
  DualStateDCD1 state;
  SolveSummary summary;
};

// Observers see the dual state after every completed sweep.
using Dcd2Observer = std::function<void(int sweep, const DualStateDCD2&)>;
using Dcd1Observer = std::function<void(int sweep, const DualStateDCD1&)>;

RankSolution2 train_rank_dcd2(const SparseDataset& data, int k, const SolverConfig& cfg,
                              const Dcd2Observer& observer = {});
RankSolution1 train_rank_dcd1(const SparseDataset& data, int k, const SolverConfig& cfg,
                              const Dcd1Observer& observer = {});

// f(a) = 0.5 w^T w + eps * sum_{i in I} |a_i| - sum_{i not in I} a_i
double dual_objective_dcd2(const DualStateDCD2& state, const SparseDataset& data, int k,
                           double eps);
// f = 0.5 w^T w + eps * sum_{i in I} (a+_i + a-_i) - sum_{i not in I} beta_i
double dual_objective_dcd1(const DualStateDCD1& state, double eps);

// sum_i y~_i a_i x_i recomputed from scratch.
std::vector<double> weight_from_duals(const SparseDataset& data, int k,
                                      std::span<const double> merged_alpha);

std::size_t count_support_vectors(std::span<const double> alpha, double tol = 1.0e-9);

struct RankReport {
  int rank = 0;
  SolveSummary summary;
  double objective = 0.0;
  std::size_t support_vectors = 0;
};

struct NpsvorFit {
  OrdinalModel model;
  std::vector<RankReport> ranks;
};

// Ranks run on up to `jobs` threads; each rank draws its own seed stream, so
// the result does not depend on the thread count.
NpsvorFit train(const SparseDataset& data, const SolverConfig& cfg, int jobs = 1);

// Rows must live in the model's feature space (see prepare_row).
int predict_old(const OrdinalModel& model, const SparseVector& x);
int predict_new(const OrdinalModel& model, const SparseVector& x);
int predict(const OrdinalModel& model, const SparseVector& x, Predictor rule);

}  // namespace npsvor
