#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "npsvor/dcd.hpp"
#include "npsvor/ordinal.hpp"
#include "npsvor/sparse.hpp"

// Linear comparison methods sharing the coordinate descent engine:
// one-vs-all SVC, epsilon-insensitive SVR with rounding, and RedSVM through
// threshold-extended samples. All of them use cfg.C1 as the cost C.
namespace npsvor {

struct BinarySolution {
  std::vector<double> alpha;
  std::vector<double> w;
  SolveSummary summary;
};

// L1-hinge SVC dual: min 0.5 w^T w - sum a_i, 0 <= a_i <= C, w = sum y_i a_i x_i.
BinarySolution solve_binary_svc(std::span<const SparseVector> rows,
                                std::span<const std::int8_t> labels, std::size_t dim, double C,
                                const SweepLimits& limits, std::uint64_t seed);

double binary_svc_objective(const BinarySolution& sol);

struct OvaModel {
  ModelMeta meta;
  std::vector<std::vector<double>> weights;  // one per rank
};

struct SvrModel {
  ModelMeta meta;
  std::vector<double> w;
};

// Binary problem k (1..p-1) scores w^T x - thresholds[k-1].
struct RedSvmModel {
  ModelMeta meta;
  std::vector<double> w;
  std::vector<double> thresholds;
};

struct BaselineReport {
  SolveSummary summary;
  double objective = 0.0;
  std::size_t support_vectors = 0;
};

struct OvaFit {
  OvaModel model;
  std::vector<BaselineReport> ranks;
};

struct SvrFit {
  SvrModel model;
  std::vector<double> beta;
  BaselineReport report;
};

struct RedSvmFit {
  RedSvmModel model;
  BaselineReport report;
};

OvaFit train_svc_ova(const SparseDataset& data, const SolverConfig& cfg, int jobs = 1);
// argmax_k w_k^T x, ties to the smallest rank.
int predict_svc_ova(const OvaModel& model, const SparseVector& x);

// Targets are the ranks 1..p treated as real values.
SvrFit train_svr(const SparseDataset& data, const SolverConfig& cfg);
// min 0.5 w^T w + eps * sum |b_i| - sum y_i b_i over -C <= b_i <= C.
double svr_objective(const SvrFit& fit, const SparseDataset& data, double eps);
// Round half away from zero, then clamp into [1, p].
int round_to_rank(double value, int p);
int predict_svr(const SvrModel& model, const SparseVector& x);

struct ExtendedDataset {
  std::vector<SparseVector> rows;  // n * (p - 1), instance-major
  std::vector<std::int8_t> labels;
  std::size_t base_features = 0;  // m
  std::size_t features = 0;       // m + p - 1
};

// Each (x_i, k) for k = 1..p-1 becomes x_i with -1 at extra coordinate k,
// labelled +1 iff y_i > k.
ExtendedDataset extend_redsvm(const SparseDataset& data);

RedSvmFit train_redsvm(const SparseDataset& data, const SolverConfig& cfg);
// 1 + sum_k [ w^T x - thresholds[k] > 0 ].
int predict_redsvm(const RedSvmModel& model, const SparseVector& x);
bool thresholds_ordered(const RedSvmModel& model);

}  // namespace npsvor
