#include "npsvor/ordinal.hpp"

#include <cmath>
#include <string>

#include "npsvor/error.hpp"
#include "npsvor/log.hpp"
#include "npsvor/parallel.hpp"
#include "npsvor/random.hpp"

namespace npsvor {

std::string_view to_string(Predictor p) { return p == Predictor::old_rule ? "old" : "new"; }

Predictor parse_predictor(std::string_view name) {
  if (name == "old") return Predictor::old_rule;
  if (name == "new") return Predictor::new_rule;
  throw UsageError("unknown predictor '" + std::string(name) + "' (expected old or new)");
}

void SolverConfig::validate() const {
  if (!(C1 > 0.0) || !std::isfinite(C1)) throw ValidationError("C1 must be positive");
  if (!(C2 > 0.0) || !std::isfinite(C2)) throw ValidationError("C2 must be positive");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("epsilon must be >= 0");
  if (!(eps_stop > 0.0) || !std::isfinite(eps_stop))
    throw ValidationError("stopping tolerance must be positive");
  if (max_sweeps < 1) throw ValidationError("max sweeps must be at least 1");
}

ModelMeta ModelMeta::of(const SparseDataset& data) {
  return {data.p, data.m, data.bias, data.label_map};
}

std::vector<double> DualStateDCD1::merged(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < middle.size(); ++j) out[middle[j]] = alpha_plus[j] - alpha_minus[j];
  for (std::size_t j = 0; j < others.size(); ++j) out[others[j]] = beta[j];
  return out;
}

namespace {

void check_rank(const SparseDataset& data, int k) {
  if (k < 1 || k > data.p)
    throw ValidationError("rank " + std::to_string(k) + " out of range 1.." +
                          std::to_string(data.p));
}

long double half_squared_norm(std::span<const double> w) {
  long double sum = 0.0L;
  for (double v : w) sum += static_cast<long double>(v) * v;
  return 0.5L * sum;
}

}  // namespace

RankSolution2 train_rank_dcd2(const SparseDataset& data, int k, const SolverConfig& cfg,
                              const Dcd2Observer& observer) {
  cfg.validate();
  check_rank(data, k);
  const std::size_t n = data.n();
  DualStateDCD2 st{std::vector<double>(n, 0.0), std::vector<double>(data.m, 0.0)};

  std::vector<std::size_t> eligible;
  eligible.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (data.rows[i].squared_norm() > 0.0) eligible.push_back(i);

  SweepState sweeps(std::move(eligible), cfg.shrinking);
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));

  auto visit = [&](std::size_t i, double M) -> CoordinateVisit {
    const SparseVector& x = data.rows[i];
    const double y = data.labels[i] > k ? 1.0 : -1.0;
    const double A = x.squared_norm();
    const double B = y * x.dot(st.w);
    double& a = st.alpha[i];
    StepResult step;
    if (data.labels[i] != k) {
      if (shrink_test_box(a, B - 1.0, cfg.C2, M)) return {0.0, true};
      step = box_step({A, B, a, cfg.C2});
    } else {
      if (shrink_test_soft(a, B + cfg.eps, B - cfg.eps, cfg.C1, M)) return {0.0, true};
      step = soft_thresh_step({A, B, a, cfg.eps, cfg.C1});
    }
    if (std::fabs(step.violation) > kUpdateThreshold && step.new_alpha != a) {
      x.axpy((step.new_alpha - a) * y, st.w);
      a = step.new_alpha;
    }
    return {step.violation, false};
  };

  SweepObserver hook;
  if (observer) hook = [&](int sweep) { observer(sweep, st); };
  const SolveSummary summary = run_sweeps(sweeps, rng, cfg.limits(), visit, hook);
  return {std::move(st), summary};
}

RankSolution1 train_rank_dcd1(const SparseDataset& data, int k, const SolverConfig& cfg,
                              const Dcd1Observer& observer) {
  cfg.validate();
  check_rank(data, k);
  const std::size_t n = data.n();
  DualStateDCD1 st;
  for (std::size_t i = 0; i < n; ++i)
    (data.labels[i] == k ? st.middle : st.others).push_back(i);
  const std::size_t l = st.middle.size();
  st.alpha_minus.assign(l, 0.0);
  st.alpha_plus.assign(l, 0.0);
  st.beta.assign(st.others.size(), 0.0);
  st.w.assign(data.m, 0.0);

  // Variable layout: [0, l) alpha-, [l, 2l) alpha+, [2l, n + l) beta.
  auto instance_of = [&](std::size_t v) {
    if (v < l) return st.middle[v];
    if (v < 2 * l) return st.middle[v - l];
    return st.others[v - 2 * l];
  };
  std::vector<std::size_t> eligible;
  eligible.reserve(n + l);
  for (std::size_t v = 0; v < n + l; ++v)
    if (data.rows[instance_of(v)].squared_norm() > 0.0) eligible.push_back(v);

  SweepState sweeps(std::move(eligible), cfg.shrinking);
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));

  auto visit = [&](std::size_t v, double M) -> CoordinateVisit {
    const std::size_t i = instance_of(v);
    const SparseVector& x = data.rows[i];
    const double A = x.squared_norm();
    const double wx = x.dot(st.w);
    double* a;
    double sign;  // coefficient of x_i in w
    double G;
    double upper;
    if (v < l) {
      a = &st.alpha_minus[v];
      sign = 1.0;
      G = wx + cfg.eps;
      upper = cfg.C1;
    } else if (v < 2 * l) {
      a = &st.alpha_plus[v - l];
      sign = -1.0;
      G = -wx + cfg.eps;
      upper = cfg.C1;
    } else {
      a = &st.beta[v - 2 * l];
      sign = data.labels[i] > k ? 1.0 : -1.0;
      G = sign * wx - 1.0;
      upper = cfg.C2;
    }
    if (shrink_test_box(*a, G, upper, M)) return {0.0, true};
    const StepResult step = box_step_gradient(A, G, *a, upper);
    if (std::fabs(step.violation) > kUpdateThreshold && step.new_alpha != *a) {
      x.axpy((step.new_alpha - *a) * sign, st.w);
      *a = step.new_alpha;
    }
    return {step.violation, false};
  };

  SweepObserver hook;
  if (observer) hook = [&](int sweep) { observer(sweep, st); };
  const SolveSummary summary = run_sweeps(sweeps, rng, cfg.limits(), visit, hook);
  return {std::move(st), summary};
}

double dual_objective_dcd2(const DualStateDCD2& state, const SparseDataset& data, int k,
                           double eps) {
  long double f = half_squared_norm(state.w);
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (data.labels[i] == k)
      f += static_cast<long double>(eps) * std::fabs(state.alpha[i]);
    else
      f -= state.alpha[i];
  }
  return static_cast<double>(f);
}

double dual_objective_dcd1(const DualStateDCD1& state, double eps) {
  long double f = half_squared_norm(state.w);
  for (std::size_t j = 0; j < state.middle.size(); ++j)
    f += static_cast<long double>(eps) * (state.alpha_plus[j] + state.alpha_minus[j]);
  for (double b : state.beta) f -= b;
  return static_cast<double>(f);
}

std::vector<double> weight_from_duals(const SparseDataset& data, int k,
                                      std::span<const double> merged_alpha) {
  std::vector<double> w(data.m, 0.0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double y = data.labels[i] > k ? 1.0 : -1.0;
    if (merged_alpha[i] != 0.0) data.rows[i].axpy(y * merged_alpha[i], w);
  }
  return w;
}

std::size_t count_support_vectors(std::span<const double> alpha, double tol) {
  std::size_t count = 0;
  for (double a : alpha)
    if (std::fabs(a) > tol) ++count;
  return count;
}

NpsvorFit train(const SparseDataset& data, const SolverConfig& cfg, int jobs) {
  cfg.validate();
  data.validate();
  NpsvorFit fit;
  fit.model.meta = ModelMeta::of(data);
  fit.model.weights.resize(static_cast<std::size_t>(data.p));
  fit.ranks.resize(static_cast<std::size_t>(data.p));

  parallel_for(static_cast<std::size_t>(data.p), jobs, [&](std::size_t slot) {
    const int k = static_cast<int>(slot) + 1;
    RankReport& report = fit.ranks[slot];
    report.rank = k;
    if (cfg.algorithm == Algorithm::dcd2) {
      RankSolution2 sol = train_rank_dcd2(data, k, cfg);
      report.summary = sol.summary;
      report.objective = dual_objective_dcd2(sol.state, data, k, cfg.eps);
      report.support_vectors = count_support_vectors(sol.state.alpha);
      fit.model.weights[slot] = std::move(sol.state.w);
    } else {
      RankSolution1 sol = train_rank_dcd1(data, k, cfg);
      report.summary = sol.summary;
      report.objective = dual_objective_dcd1(sol.state, cfg.eps);
      report.support_vectors = count_support_vectors(sol.state.merged(data.n()));
      fit.model.weights[slot] = std::move(sol.state.w);
    }
    if (report.summary.reached_max_sweeps)
      log_warning("rank " + std::to_string(k) + ": reached max sweeps (" +
                  std::to_string(cfg.max_sweeps) + ") before the stopping condition");
  });
  return fit;
}

int predict_old(const OrdinalModel& model, const SparseVector& x) {
  int best = 1;
  double best_distance = std::fabs(model.score(1, x));
  for (int k = 2; k <= model.meta.p; ++k) {
    const double d = std::fabs(model.score(k, x));
    if (d < best_distance) {
      best = k;
      best_distance = d;
    }
  }
  return best;
}

int predict_new(const OrdinalModel& model, const SparseVector& x) {
  int rank = 1;
  double previous = model.score(1, x);
  for (int k = 1; k < model.meta.p; ++k) {
    const double next = model.score(k + 1, x);
    if (previous + next > 0.0) ++rank;
    previous = next;
  }
  return rank;
}

int predict(const OrdinalModel& model, const SparseVector& x, Predictor rule) {
  return rule == Predictor::old_rule ? predict_old(model, x) : predict_new(model, x);
}

}  // namespace npsvor
