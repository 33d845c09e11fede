#include "npsvor/baselines.hpp"

#include <cmath>
#include <string>

#include "npsvor/error.hpp"
#include "npsvor/log.hpp"
#include "npsvor/parallel.hpp"
#include "npsvor/random.hpp"

namespace npsvor {

namespace {

std::vector<std::size_t> nonzero_rows(std::span<const SparseVector> rows) {
  std::vector<std::size_t> eligible;
  eligible.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].squared_norm() > 0.0) eligible.push_back(i);
  return eligible;
}

void warn_if_capped(const SolveSummary& s, const std::string& what) {
  if (s.reached_max_sweeps) log_warning(what + ": reached max sweeps before the stopping condition");
}

}  // namespace

BinarySolution solve_binary_svc(std::span<const SparseVector> rows,
                                std::span<const std::int8_t> labels, std::size_t dim, double C,
                                const SweepLimits& limits, std::uint64_t seed) {
  if (rows.size() != labels.size()) throw ValidationError("row and label counts differ");
  BinarySolution sol{std::vector<double>(rows.size(), 0.0), std::vector<double>(dim, 0.0), {}};
  SweepState state(nonzero_rows(rows), limits.shrinking);
  Rng rng(seed);
  auto visit = [&](std::size_t i, double M) -> CoordinateVisit {
    const SparseVector& x = rows[i];
    const double y = labels[i];
    const double B = y * x.dot(sol.w);
    double& a = sol.alpha[i];
    if (shrink_test_box(a, B - 1.0, C, M)) return {0.0, true};
    const StepResult step = box_step({x.squared_norm(), B, a, C});
    if (std::fabs(step.violation) > kUpdateThreshold && step.new_alpha != a) {
      x.axpy((step.new_alpha - a) * y, sol.w);
      a = step.new_alpha;
    }
    return {step.violation, false};
  };
  sol.summary = run_sweeps(state, rng, limits, visit);
  return sol;
}

double binary_svc_objective(const BinarySolution& sol) {
  long double f = 0.0L;
  for (double v : sol.w) f += static_cast<long double>(v) * v;
  f *= 0.5L;
  for (double a : sol.alpha) f -= a;
  return static_cast<double>(f);
}

OvaFit train_svc_ova(const SparseDataset& data, const SolverConfig& cfg, int jobs) {
  cfg.validate();
  data.validate();
  OvaFit fit;
  fit.model.meta = ModelMeta::of(data);
  fit.model.weights.resize(static_cast<std::size_t>(data.p));
  fit.ranks.resize(static_cast<std::size_t>(data.p));
  parallel_for(static_cast<std::size_t>(data.p), jobs, [&](std::size_t slot) {
    const int k = static_cast<int>(slot) + 1;
    std::vector<std::int8_t> y(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) y[i] = data.labels[i] == k ? 1 : -1;
    BinarySolution sol = solve_binary_svc(data.rows, y, data.m, cfg.C1, cfg.limits(),
                                          derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    warn_if_capped(sol.summary, "svc rank " + std::to_string(k));
    fit.ranks[slot] = {sol.summary, binary_svc_objective(sol),
                       count_support_vectors(sol.alpha)};
    fit.model.weights[slot] = std::move(sol.w);
  });
  return fit;
}

int predict_svc_ova(const OvaModel& model, const SparseVector& x) {
  int best = 1;
  double best_score = x.dot(model.weights.front());
  for (int k = 2; k <= model.meta.p; ++k) {
    const double s = x.dot(model.weights[static_cast<std::size_t>(k - 1)]);
    if (s > best_score) {
      best = k;
      best_score = s;
    }
  }
  return best;
}

SvrFit train_svr(const SparseDataset& data, const SolverConfig& cfg) {
  cfg.validate();
  data.validate();
  SvrFit fit;
  fit.model.meta = ModelMeta::of(data);
  fit.model.w.assign(data.m, 0.0);
  fit.beta.assign(data.n(), 0.0);
  auto& w = fit.model.w;
  const double C = cfg.C1;

  SweepState state(nonzero_rows(data.rows), cfg.shrinking);
  Rng rng(derive_seed(cfg.seed, 0));
  auto visit = [&](std::size_t i, double M) -> CoordinateVisit {
    const SparseVector& x = data.rows[i];
    const double B = x.dot(w) - static_cast<double>(data.labels[i]);
    double& b = fit.beta[i];
    if (shrink_test_soft(b, B + cfg.eps, B - cfg.eps, C, M)) return {0.0, true};
    const StepResult step = soft_thresh_step({x.squared_norm(), B, b, cfg.eps, C});
    if (std::fabs(step.violation) > kUpdateThreshold && step.new_alpha != b) {
      x.axpy(step.new_alpha - b, w);
      b = step.new_alpha;
    }
    return {step.violation, false};
  };
  fit.report.summary = run_sweeps(state, rng, cfg.limits(), visit);
  warn_if_capped(fit.report.summary, "svr");
  fit.report.objective = svr_objective(fit, data, cfg.eps);
  fit.report.support_vectors = count_support_vectors(fit.beta);
  return fit;
}

double svr_objective(const SvrFit& fit, const SparseDataset& data, double eps) {
  long double f = 0.0L;
  for (double v : fit.model.w) f += static_cast<long double>(v) * v;
  f *= 0.5L;
  for (std::size_t i = 0; i < data.n(); ++i)
    f += static_cast<long double>(eps) * std::fabs(fit.beta[i]) -
         static_cast<long double>(data.labels[i]) * fit.beta[i];
  return static_cast<double>(f);
}

int round_to_rank(double value, int p) {
  if (std::isnan(value)) return 1;
  const double r = std::round(value);  // half away from zero
  if (r < 1.0) return 1;
  if (r > static_cast<double>(p)) return p;
  return static_cast<int>(r);
}

int predict_svr(const SvrModel& model, const SparseVector& x) {
  return round_to_rank(x.dot(model.w), model.meta.p);
}

ExtendedDataset extend_redsvm(const SparseDataset& data) {
  ExtendedDataset ext;
  const auto thresholds = static_cast<std::size_t>(data.p - 1);
  ext.base_features = data.m;
  ext.features = data.m + thresholds;
  ext.rows.reserve(data.n() * thresholds);
  ext.labels.reserve(data.n() * thresholds);
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t k = 1; k <= thresholds; ++k) {
      ext.rows.push_back(data.rows[i].truncated(data.m, std::pair{data.m + k - 1, -1.0}));
      ext.labels.push_back(data.labels[i] > static_cast<int>(k) ? 1 : -1);
    }
  }
  return ext;
}

RedSvmFit train_redsvm(const SparseDataset& data, const SolverConfig& cfg) {
  cfg.validate();
  data.validate();
  const ExtendedDataset ext = extend_redsvm(data);
  BinarySolution sol = solve_binary_svc(ext.rows, ext.labels, ext.features, cfg.C1,
                                        cfg.limits(), derive_seed(cfg.seed, 0));
  warn_if_capped(sol.summary, "redsvm");
  RedSvmFit fit;
  fit.report = {sol.summary, binary_svc_objective(sol), count_support_vectors(sol.alpha)};
  fit.model.meta = ModelMeta::of(data);
  fit.model.w.assign(sol.w.begin(), sol.w.begin() + static_cast<long>(data.m));
  fit.model.thresholds.assign(sol.w.begin() + static_cast<long>(data.m), sol.w.end());
  return fit;
}

int predict_redsvm(const RedSvmModel& model, const SparseVector& x) {
  const double score = x.dot(model.w);
  int rank = 1;
  for (double theta : model.thresholds)
    if (score - theta > 0.0) ++rank;
  return rank;
}

bool thresholds_ordered(const RedSvmModel& model) {
  for (std::size_t k = 1; k < model.thresholds.size(); ++k)
    if (model.thresholds[k] < model.thresholds[k - 1]) return false;
  return true;
}

}  // namespace npsvor
