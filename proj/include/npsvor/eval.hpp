#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "npsvor/model.hpp"
#include "npsvor/sparse.hpp"

namespace npsvor {

struct EvalReport {
  int p = 0;
  std::size_t count = 0;
  double mae = 0.0;
  double mse = 0.0;
  double accuracy = 0.0;
  std::vector<double> rank_accuracy;              // NaN for ranks absent from the truth
  std::vector<std::vector<std::size_t>> confusion;  // [true - 1][predicted - 1]
};

EvalReport evaluate(std::span<const int> truth, std::span<const int> predicted, int p);

// Trains on a dataset and returns a rank predictor for rows in its feature space.
using RankFunction = std::function<int(const SparseVector&)>;
struct Learner {
  std::string name;
  std::function<RankFunction(const SparseDataset&, const SolverConfig&)> fit;
};

Learner make_learner(SolverKind kind, Predictor predictor = Predictor::new_rule, int jobs = 1);

// Fold id in [0, folds) for every instance: ranks are shuffled independently
// and dealt round-robin, so each fold sees every rank in proportion.
std::vector<int> stratified_folds(const SparseDataset& data, int folds, std::uint64_t seed);

struct CvResult {
  double mae_mean = 0.0;
  double mae_std = 0.0;
  double mse_mean = 0.0;
  double mse_std = 0.0;
  std::vector<EvalReport> folds;
};

CvResult cross_validate(const SparseDataset& data, const Learner& learner,
                        const SolverConfig& cfg, int folds, std::uint64_t seed, int jobs = 1);

struct GridCell {
  double C1 = 1.0;
  double C2 = 1.0;
  CvResult cv;
};

struct GridResult {
  std::vector<GridCell> cells;
  std::size_t best = 0;  // smallest mean MAE; ties to smaller C1, then C2

  const GridCell& best_cell() const { return cells.at(best); }
};

// lo:step:hi over log2 C, e.g. "-5:1:5".
struct Log2Range {
  int lo = -5;
  int step = 1;
  int hi = 5;

  static Log2Range parse(std::string_view text);
  std::vector<double> values() const;
};

std::vector<std::pair<double, double>> tied_grid(const Log2Range& range);
std::vector<std::pair<double, double>> full_grid(const Log2Range& c1, const Log2Range& c2);

GridResult grid_search(const SparseDataset& data, const Learner& learner,
                       std::span<const std::pair<double, double>> grid, const SolverConfig& cfg,
                       int folds, std::uint64_t seed, int jobs = 1);

std::vector<int> predict_all(const RankFunction& rank_of, std::span<const SparseVector> rows);

std::string format_report(const EvalReport& report);
std::string format_grid(const GridResult& grid);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const GridCell& cell);

}  // namespace npsvor
