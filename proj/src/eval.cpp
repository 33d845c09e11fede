#include "npsvor/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <tuple>
#include <sstream>

#include "npsvor/error.hpp"
#include "npsvor/parallel.hpp"
#include "npsvor/random.hpp"

namespace npsvor {

EvalReport evaluate(std::span<const int> truth, std::span<const int> predicted, int p) {
  if (truth.size() != predicted.size())
    throw ValidationError("label sequences differ in length");
  if (truth.empty()) throw ValidationError("nothing to evaluate");
  if (p < 1) throw ValidationError("rank count must be positive");

  EvalReport r;
  r.p = p;
  r.count = truth.size();
  const auto P = static_cast<std::size_t>(p);
  r.confusion.assign(P, std::vector<std::size_t>(P, 0));
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int y = truth[i];
    const int yhat = predicted[i];
    if (y < 1 || y > p || yhat < 1 || yhat > p)
      throw ValidationError("label out of range 1.." + std::to_string(p));
    const double diff = static_cast<double>(yhat - y);
    abs_sum += std::fabs(diff);
    sq_sum += diff * diff;
    hits += y == yhat;
    ++r.confusion[static_cast<std::size_t>(y - 1)][static_cast<std::size_t>(yhat - 1)];
  }
  const auto n = static_cast<double>(truth.size());
  r.mae = abs_sum / n;
  r.mse = sq_sum / n;
  r.accuracy = static_cast<double>(hits) / n;
  r.rank_accuracy.resize(P);
  for (std::size_t k = 0; k < P; ++k) {
    std::size_t row = 0;
    for (auto c : r.confusion[k]) row += c;
    r.rank_accuracy[k] = row ? static_cast<double>(r.confusion[k][k]) / static_cast<double>(row)
                             : std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

Learner make_learner(SolverKind kind, Predictor predictor, int jobs) {
  Learner learner;
  learner.name = std::string(to_string(kind));
  if (kind == SolverKind::npsvor_dcd1 || kind == SolverKind::npsvor_dcd2)
    learner.name += std::string("/") + std::string(to_string(predictor));
  learner.fit = [kind, predictor, jobs](const SparseDataset& data, const SolverConfig& cfg) {
    auto model = std::make_shared<AnyModel>(train_model(kind, data, cfg, predictor, jobs));
    return RankFunction(
        [model, predictor](const SparseVector& x) { return predict_rank(*model, x, predictor); });
  };
  return learner;
}

std::vector<int> stratified_folds(const SparseDataset& data, int folds, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("need at least 2 folds");
  const auto counts = data.rank_counts();
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] < static_cast<std::size_t>(folds))
      throw ValidationError("rank " + std::to_string(k + 1) + " has " +
                            std::to_string(counts[k]) + " instances, fewer than " +
                            std::to_string(folds) + " folds");
  std::vector<std::vector<std::size_t>> by_rank(counts.size());
  for (std::size_t i = 0; i < data.n(); ++i)
    by_rank[static_cast<std::size_t>(data.labels[i] - 1)].push_back(i);

  Rng rng(seed);
  std::vector<int> fold_of(data.n(), 0);
  // The dealing offset carries over between ranks so small ranks do not
  // all land in the first folds.
  std::size_t offset = 0;
  for (auto& members : by_rank) {
    rng.shuffle(std::span(members));
    for (std::size_t j = 0; j < members.size(); ++j)
      fold_of[members[j]] = static_cast<int>((offset + j) % static_cast<std::size_t>(folds));
    offset += members.size();
  }
  return fold_of;
}

std::vector<int> predict_all(const RankFunction& rank_of, std::span<const SparseVector> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& x : rows) out.push_back(rank_of(x));
  return out;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double denom = values.size() > 1 ? static_cast<double>(values.size() - 1) : 1.0;
  return {mean, std::sqrt(var / denom)};
}

}  // namespace

CvResult cross_validate(const SparseDataset& data, const Learner& learner,
                        const SolverConfig& cfg, int folds, std::uint64_t seed, int jobs) {
  const std::vector<int> fold_of = stratified_folds(data, folds, seed);
  CvResult result;
  result.folds.resize(static_cast<std::size_t>(folds));
  parallel_for(static_cast<std::size_t>(folds), jobs, [&](std::size_t f) {
    std::vector<std::size_t> train_idx, valid_idx;
    for (std::size_t i = 0; i < data.n(); ++i)
      (fold_of[i] == static_cast<int>(f) ? valid_idx : train_idx).push_back(i);
    const SparseDataset train = data.subset(train_idx);
    const SparseDataset valid = data.subset(valid_idx);
    const RankFunction rank_of = learner.fit(train, cfg);
    result.folds[f] = evaluate(valid.labels, predict_all(rank_of, valid.rows), data.p);
  });
  std::vector<double> maes, mses;
  for (const auto& r : result.folds) {
    maes.push_back(r.mae);
    mses.push_back(r.mse);
  }
  std::tie(result.mae_mean, result.mae_std) = mean_std(maes);
  std::tie(result.mse_mean, result.mse_std) = mean_std(mses);
  return result;
}

Log2Range Log2Range::parse(std::string_view text) {
  Log2Range r;
  int* fields[3] = {&r.lo, &r.step, &r.hi};
  std::size_t start = 0;
  for (int f = 0; f < 3; ++f) {
    const auto colon = f < 2 ? text.find(':', start) : text.size();
    if (colon == std::string_view::npos) throw UsageError("grid must look like lo:step:hi");
    const std::string_view part = text.substr(start, colon - start);
    const char* b = part.data();
    const char* e = part.data() + part.size();
    if (b != e && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, *fields[f]);
    if (ec != std::errc() || ptr != e)
      throw UsageError("bad grid component '" + std::string(part) + "'");
    start = colon + 1;
  }
  if (r.step <= 0 || r.hi < r.lo) throw UsageError("grid needs step > 0 and lo <= hi");
  return r;
}

std::vector<double> Log2Range::values() const {
  std::vector<double> out;
  for (int e = lo; e <= hi; e += step) out.push_back(std::ldexp(1.0, e));
  return out;
}

std::vector<std::pair<double, double>> tied_grid(const Log2Range& range) {
  std::vector<std::pair<double, double>> grid;
  for (double c : range.values()) grid.emplace_back(c, c);
  return grid;
}

std::vector<std::pair<double, double>> full_grid(const Log2Range& c1, const Log2Range& c2) {
  std::vector<std::pair<double, double>> grid;
  for (double a : c1.values())
    for (double b : c2.values()) grid.emplace_back(a, b);
  return grid;
}

GridResult grid_search(const SparseDataset& data, const Learner& learner,
                       std::span<const std::pair<double, double>> grid, const SolverConfig& cfg,
                       int folds, std::uint64_t seed, int jobs) {
  if (grid.empty()) throw ValidationError("empty parameter grid");
  GridResult result;
  result.cells.resize(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t c) {
    SolverConfig cell_cfg = cfg;
    cell_cfg.C1 = grid[c].first;
    cell_cfg.C2 = grid[c].second;
    result.cells[c] = {grid[c].first, grid[c].second,
                       cross_validate(data, learner, cell_cfg, folds, seed, 1)};
  });
  auto better = [](const GridCell& a, const GridCell& b) {
    if (a.cv.mae_mean != b.cv.mae_mean) return a.cv.mae_mean < b.cv.mae_mean;
    if (a.C1 != b.C1) return a.C1 < b.C1;
    return a.C2 < b.C2;
  };
  for (std::size_t c = 1; c < result.cells.size(); ++c)
    if (better(result.cells[c], result.cells[result.best])) result.best = c;
  return result;
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "instances %zu  MAE %.4f  MSE %.4f  accuracy %.4f\n",
                report.count, report.mae, report.mse, report.accuracy);
  out << line << "confusion (rows: true rank, columns: predicted rank)\n";
  out << "      ";
  for (int k = 1; k <= report.p; ++k) {
    std::snprintf(line, sizeof line, "%8d", k);
    out << line;
  }
  out << '\n';
  for (int k = 1; k <= report.p; ++k) {
    std::snprintf(line, sizeof line, "%6d", k);
    out << line;
    for (auto c : report.confusion[static_cast<std::size_t>(k - 1)]) {
      std::snprintf(line, sizeof line, "%8zu", c);
      out << line;
    }
    out << '\n';
  }
  return out.str();
}

std::string format_grid(const GridResult& grid) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%12s %12s %10s %10s %10s %10s\n", "C1", "C2", "MAE", "MAE_sd",
                "MSE", "MSE_sd");
  out << line;
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    const auto& cell = grid.cells[c];
    std::snprintf(line, sizeof line, "%12.6g %12.6g %10.4f %10.4f %10.4f %10.4f%s\n", cell.C1,
                  cell.C2, cell.cv.mae_mean, cell.cv.mae_std, cell.cv.mse_mean, cell.cv.mse_std,
                  c == grid.best ? "  *" : "");
    out << line;
  }
  return out.str();
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json rank_accuracy = nlohmann::json::array();
  for (double a : report.rank_accuracy)
    rank_accuracy.push_back(std::isnan(a) ? nlohmann::json(nullptr) : nlohmann::json(a));
  return {{"count", report.count},       {"mae", report.mae},
          {"mse", report.mse},           {"accuracy", report.accuracy},
          {"rank_accuracy", rank_accuracy}, {"confusion", report.confusion}};
}

nlohmann::json to_json(const GridCell& cell) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : cell.cv.folds) folds.push_back({{"mae", f.mae}, {"mse", f.mse}});
  return {{"C1", cell.C1},
          {"C2", cell.C2},
          {"mae_mean", cell.cv.mae_mean},
          {"mae_std", cell.cv.mae_std},
          {"mse_mean", cell.cv.mse_mean},
          {"mse_std", cell.cv.mse_std},
          {"folds", folds}};
}

}  // namespace npsvor
