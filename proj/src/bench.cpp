#include "npsvor/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "npsvor/error.hpp"
#include "npsvor/log.hpp"
#include "npsvor/random.hpp"

namespace npsvor {

double cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1.0e-9 * static_cast<double>(ts.tv_nsec);
}

SyntheticConfig SyntheticConfig::from_json(const nlohmann::json& j) {
  SyntheticConfig c;
  try {
    c.version = j.value("version", c.version);
    if (c.version != 1)
      throw ValidationError("synthetic config: unsupported version " + std::to_string(c.version));
    c.n = j.value("n", c.n);
    c.m = j.value("m", c.m);
    c.avg_nnz = j.value("avg_nnz", c.avg_nnz);
    c.ranks = j.value("ranks", c.ranks);
    c.noise = j.value("noise", c.noise);
    c.bias = j.value("bias", c.bias);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("synthetic config: ") + e.what());
  }
  if (c.n < 2 || c.m < 1 || c.ranks < 2 || !(c.avg_nnz >= 1.0) || !(c.noise >= 0.0) ||
      c.n < static_cast<std::size_t>(c.ranks))
    throw ValidationError("synthetic config: out-of-range field");
  return c;
}

SyntheticConfig SyntheticConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json SyntheticConfig::to_json() const {
  return {{"version", version}, {"n", n},         {"m", m},       {"avg_nnz", avg_nnz},
          {"ranks", ranks},     {"noise", noise}, {"bias", bias}, {"seed", seed}};
}

SparseDataset generate_synthetic(const SyntheticConfig& cfg) {
  Rng weight_rng(derive_seed(cfg.seed, 0));
  Rng row_rng(derive_seed(cfg.seed, 1));
  Rng noise_rng(derive_seed(cfg.seed, 2));

  std::vector<double> hidden(cfg.m);
  for (auto& v : hidden) v = weight_rng.normal();

  // Geometric on {1, 2, ...} with the requested mean.
  const double q = 1.0 - 1.0 / cfg.avg_nnz;
  auto draw_nnz = [&] {
    if (q <= 0.0) return std::size_t{1};
    double u = row_rng.uniform();
    while (u <= 0.0) u = row_rng.uniform();
    const double k = 1.0 + std::floor(std::log(u) / std::log(q));
    return static_cast<std::size_t>(std::min(k, static_cast<double>(cfg.m)));
  };

  RawDataset raw;
  raw.feature_count = cfg.m;
  raw.rows.reserve(cfg.n);
  std::vector<double> scores(cfg.n);
  std::vector<std::int32_t> picked;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const std::size_t nnz = draw_nnz();
    picked.clear();
    while (picked.size() < nnz) {
      const auto j = static_cast<std::int32_t>(row_rng.below(cfg.m));
      if (std::find(picked.begin(), picked.end(), j) == picked.end()) picked.push_back(j);
    }
    std::sort(picked.begin(), picked.end());
    std::vector<FeatureNode> entries;
    entries.reserve(nnz);
    double norm2 = 0.0;
    for (auto j : picked) {
      const double v = row_rng.uniform(0.2, 1.0);
      entries.push_back({j, v});
      norm2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& e : entries) e.value *= inv;
    raw.rows.push_back(SparseVector::from_entries(std::move(entries)));
    scores[i] = raw.rows.back().dot(hidden);
  }

  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(cfg.n);
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  const double sd = std::sqrt(var / static_cast<double>(cfg.n));
  for (double& s : scores) s += cfg.noise * sd * noise_rng.normal();

  std::vector<std::size_t> order(cfg.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  raw.labels.assign(cfg.n, 0);
  const auto P = static_cast<std::size_t>(cfg.ranks);
  for (std::size_t pos = 0; pos < cfg.n; ++pos)
    raw.labels[order[pos]] = static_cast<std::int64_t>(1 + pos * P / cfg.n);

  std::optional<double> bias;
  if (cfg.bias > 0.0) bias = cfg.bias;
  return make_dataset(std::move(raw), bias);
}

const TraceSample* ConvergenceTrace::first_below(double target) const {
  for (const auto& s : samples)
    if (s.relative <= target) return &s;
  return nullptr;
}

namespace {

template <class State, class Trainer, class Objective>
ConvergenceTrace trace_run(const std::string& name, int rank, Trainer&& trainer,
                           Objective&& objective) {
  ConvergenceTrace trace;
  trace.solver = name;
  trace.rank = rank;
  trace.samples.push_back({0, 0.0, 0.0, 0.0});  // all-zero duals
  double solver_time = 0.0;
  double mark = cpu_seconds();
  auto observer = [&](int sweep, const State& state) {
    solver_time += cpu_seconds() - mark;
    trace.samples.push_back({sweep, solver_time, objective(state), 0.0});
    mark = cpu_seconds();
  };
  trace.summary = trainer(observer);
  return trace;
}

}  // namespace

ConvergenceResult bench_convergence(const SparseDataset& data, const SolverConfig& cfg,
                                    const ConvergenceOptions& options) {
  cfg.validate();
  data.validate();
  const int k = options.rank;
  if (k < 1 || k > data.p) throw ValidationError("convergence rank out of range");

  SolverConfig ref = cfg;
  ref.eps_stop = options.reference_eps_stop;
  ref.max_sweeps = options.reference_max_sweeps;
  const RankSolution2 ref2 = train_rank_dcd2(data, k, ref);
  const RankSolution1 ref1 = train_rank_dcd1(data, k, ref);

  ConvergenceResult result;
  result.reference_converged =
      !ref2.summary.reached_max_sweeps && !ref1.summary.reached_max_sweeps;
  if (!result.reference_converged)
    log_warning("convergence reference run hit max sweeps; using the best objective seen");

  SolverConfig run = cfg;
  run.eps_stop = options.trace_eps_stop;
  run.max_sweeps = options.trace_max_sweeps;
  auto f2 = [&](const DualStateDCD2& s) { return dual_objective_dcd2(s, data, k, cfg.eps); };
  auto f1 = [&](const DualStateDCD1& s) { return dual_objective_dcd1(s, cfg.eps); };

  result.dcd2 = trace_run<DualStateDCD2>("npsvor-dcd2", k, [&](const Dcd2Observer& obs) {
    return train_rank_dcd2(data, k, run, obs).summary;
  }, f2);
  result.dcd1 = trace_run<DualStateDCD1>("npsvor-dcd1", k, [&](const Dcd1Observer& obs) {
    return train_rank_dcd1(data, k, run, obs).summary;
  }, f1);

  double f_star = std::min(f2(ref2.state), f1(ref1.state));
  for (const auto* t : {&result.dcd1, &result.dcd2})
    for (const auto& s : t->samples) f_star = std::min(f_star, s.objective);
  result.f_star = f_star;
  const double scale = f_star != 0.0 ? std::fabs(f_star) : 1.0;
  for (auto* t : {&result.dcd1, &result.dcd2})
    for (auto& s : t->samples) s.relative = (s.objective - f_star) / scale;
  return result;
}

namespace {

double ratio(double value, double base) {
  if (base == 0.0) return value == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return value / base;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<int> predict_rows(const OrdinalModel& model, const SparseDataset& test,
                              Predictor rule) {
  std::vector<int> out;
  out.reserve(test.n());
  for (const auto& x : test.rows) out.push_back(predict(model, x, rule));
  return out;
}

}  // namespace

std::vector<EpsilonRow> bench_epsilon(const SparseDataset& train_set, const SparseDataset& test,
                                      const std::vector<double>& eps_grid,
                                      const SolverConfig& cfg, int repeats) {
  if (std::find(eps_grid.begin(), eps_grid.end(), 0.0) == eps_grid.end())
    throw ValidationError("epsilon grid must contain 0");
  if (repeats < 1) throw ValidationError("repeats must be positive");
  auto config_for = [&](double eps) {
    SolverConfig c = cfg;
    c.eps = eps;
    return c;
  };
  // Repeats are interleaved across the grid after one untimed warm-up so
  // that drift in machine load hits every value alike.
  train(train_set, config_for(eps_grid.front()), 1);
  std::vector<std::vector<double>> times(eps_grid.size());
  std::vector<NpsvorFit> fits(eps_grid.size());
  for (int r = 0; r < repeats; ++r)
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
      const double t0 = cpu_seconds();
      fits[e] = train(train_set, config_for(eps_grid[e]), 1);
      times[e].push_back(cpu_seconds() - t0);
    }
  std::vector<EpsilonRow> rows;
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    const NpsvorFit& fit = fits[e];
    EpsilonRow row;
    row.eps = eps_grid[e];
    const EvalReport report =
        evaluate(test.labels, predict_rows(fit.model, test, Predictor::new_rule), test.p);
    row.mae = report.mae;
    row.mse = report.mse;
    row.seconds = median(times[e]);
    for (const auto& r : fit.ranks) row.support_vectors += r.support_vectors;
    rows.push_back(row);
  }
  const auto base = *std::find_if(rows.begin(), rows.end(),
                                  [](const EpsilonRow& r) { return r.eps == 0.0; });
  for (auto& r : rows) {
    r.mae_ratio = ratio(r.mae, base.mae);
    r.mse_ratio = ratio(r.mse, base.mse);
    r.time_ratio = ratio(r.seconds, base.seconds);
    r.sv_ratio = ratio(static_cast<double>(r.support_vectors),
                       static_cast<double>(base.support_vectors));
  }
  return rows;
}

PredictorComparison compare_predictors(const OrdinalModel& model, const SparseDataset& test) {
  return {evaluate(test.labels, predict_rows(model, test, Predictor::old_rule), test.p),
          evaluate(test.labels, predict_rows(model, test, Predictor::new_rule), test.p)};
}

PredictorComparison bench_predictors(const SparseDataset& train_set, const SparseDataset& test,
                                     const SolverConfig& cfg) {
  return compare_predictors(train(train_set, cfg, 1).model, test);
}

PredictorGeometry PredictorGeometry::standard() {
  PredictorGeometry g;
  g.clusters = {ClusterSpec{{-0.934, 0.854}, 2.168, 2.911, 0.234},
                ClusterSpec{{0.999, -0.588}, 2.979, 1.144, 0.543},
                ClusterSpec{{0.903, 0.963}, 1.281, 3.418, 0.334}};
  g.per_rank = 60;
  g.bias = 1.0;
  g.train_seed = 1;
  g.probes = {Probe{{-4.0, 5.3}, 1}, Probe{{1.4, 4.5}, 3}};
  return g;
}

SparseDataset PredictorGeometry::sample(std::uint64_t seed) const {
  Rng rng(seed);
  RawDataset raw;
  raw.feature_count = 2;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const ClusterSpec& s = clusters[c];
    const double ca = std::cos(s.angle);
    const double sa = std::sin(s.angle);
    for (std::size_t i = 0; i < per_rank; ++i) {
      const double u = s.sd_long * rng.normal();
      const double v = s.sd_short * rng.normal();
      const double point[2] = {s.mean[0] + ca * u - sa * v, s.mean[1] + sa * u + ca * v};
      raw.rows.push_back(SparseVector::from_dense(point));
      raw.labels.push_back(static_cast<std::int64_t>(c + 1));
    }
  }
  return make_dataset(std::move(raw), bias);
}

SparseVector PredictorGeometry::probe_row(const Probe& probe) const {
  return prepare_row(SparseVector::from_dense(probe.point), 2, bias);
}

MethodResult run_method(const NamedSplit& split, const MethodSpec& method,
                        const Log2Range& grid, const SolverConfig& cfg, int folds,
                        std::uint64_t seed, int jobs) {
  const Learner learner = make_learner(method.kind, method.predictor, 1);
  const bool ordinal =
      method.kind == SolverKind::npsvor_dcd1 || method.kind == SolverKind::npsvor_dcd2;
  const auto cells = ordinal && method.separate_c2 ? full_grid(grid, grid) : tied_grid(grid);
  const GridResult search = grid_search(split.train, learner, cells, cfg, folds, seed, jobs);
  const GridCell& best = search.best_cell();

  SolverConfig final_cfg = cfg;
  final_cfg.C1 = best.C1;
  final_cfg.C2 = best.C2;
  const double t0 = cpu_seconds();
  const AnyModel model = train_model(method.kind, split.train, final_cfg, method.predictor, 1);
  const double seconds = cpu_seconds() - t0;

  std::vector<int> predicted;
  predicted.reserve(split.test.n());
  for (const auto& x : split.test.rows) predicted.push_back(predict_rank(model, x, method.predictor));

  MethodResult r;
  r.dataset = split.name;
  r.method = learner.name;
  r.C1 = best.C1;
  r.C2 = best.C2;
  r.cv_mae = best.cv.mae_mean;
  r.test = evaluate(split.test.labels, predicted, split.test.p);
  r.train_seconds = seconds;
  return r;
}

std::vector<MethodResult> bench_methods(const std::vector<NamedSplit>& splits,
                                        const std::vector<MethodSpec>& methods,
                                        const Log2Range& grid, const SolverConfig& cfg, int folds,
                                        std::uint64_t seed, int jobs) {
  std::vector<MethodResult> results;
  for (const auto& split : splits)
    for (const auto& method : methods) {
      results.push_back(run_method(split, method, grid, cfg, folds, seed, jobs));
      log_info(split.name + " " + results.back().method + " done");
    }
  return results;
}

nlohmann::json to_json(const ConvergenceTrace& trace) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : trace.samples)
    samples.push_back({{"sweep", s.sweep},
                       {"seconds", s.seconds},
                       {"objective", s.objective},
                       {"relative", s.relative}});
  return {{"record", "convergence"},
          {"solver", trace.solver},
          {"rank", trace.rank},
          {"sweeps", trace.summary.sweeps},
          {"reached_max_sweeps", trace.summary.reached_max_sweeps},
          {"samples", samples}};
}

nlohmann::json to_json(const EpsilonRow& row) {
  return {{"record", "epsilon"},         {"eps", row.eps},
          {"mae", row.mae},              {"mse", row.mse},
          {"seconds", row.seconds},      {"support_vectors", row.support_vectors},
          {"mae_ratio", row.mae_ratio},  {"mse_ratio", row.mse_ratio},
          {"time_ratio", row.time_ratio}, {"sv_ratio", row.sv_ratio}};
}

nlohmann::json to_json(const MethodResult& result) {
  nlohmann::json j = to_json(result.test);
  j["record"] = "method";
  j["dataset"] = result.dataset;
  j["method"] = result.method;
  j["C1"] = result.C1;
  j["C2"] = result.C2;
  j["cv_mae"] = result.cv_mae;
  j["train_seconds"] = result.train_seconds;
  return j;
}

std::string format_convergence(const ConvergenceResult& result, double target) {
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof line, "f* = %.12g (reference %s)\n", result.f_star,
                result.reference_converged ? "converged" : "hit max sweeps");
  out << line;
  std::snprintf(line, sizeof line, "%-12s %8s %12s %14s %14s\n", "solver", "sweeps", "seconds",
                "final rel", "sec to target");
  out << line;
  for (const auto* t : {&result.dcd1, &result.dcd2}) {
    const TraceSample* hit = t->first_below(target);
    char reach[32];
    if (hit) std::snprintf(reach, sizeof reach, "%.4f", hit->seconds);
    else std::snprintf(reach, sizeof reach, "never");
    std::snprintf(line, sizeof line, "%-12s %8d %12.4f %14.3e %14s\n", t->solver.c_str(),
                  t->summary.sweeps, t->samples.back().seconds, t->samples.back().relative, reach);
    out << line;
  }
  return out.str();
}

std::string format_epsilon(const std::vector<EpsilonRow>& rows) {
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof line, "%6s %8s %8s %10s %8s %9s %9s %9s %9s\n", "eps", "MAE", "MSE",
                "seconds", "nSV", "MAE/0", "MSE/0", "time/0", "nSV/0");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%6.3f %8.4f %8.4f %10.4f %8zu %9.4f %9.4f %9.4f %9.4f\n",
                  r.eps, r.mae, r.mse, r.seconds, r.support_vectors, r.mae_ratio, r.mse_ratio,
                  r.time_ratio, r.sv_ratio);
    out << line;
  }
  return out.str();
}

std::string format_predictors(const PredictorComparison& cmp) {
  char line[200];
  std::snprintf(line, sizeof line,
                "%-6s %8s %8s\n%-6s %8.4f %8.4f\n%-6s %8.4f %8.4f\n", "rule", "MAE", "MSE",
                "old", cmp.old_rule.mae, cmp.old_rule.mse, "new", cmp.new_rule.mae,
                cmp.new_rule.mse);
  return line;
}

std::string format_methods(const std::vector<MethodResult>& results) {
  std::ostringstream out;
  char line[240];
  std::snprintf(line, sizeof line, "%-16s %-18s %10s %10s %8s %8s %8s %10s\n", "dataset",
                "method", "C1", "C2", "cvMAE", "MAE", "MSE", "seconds");
  out << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-16s %-18s %10.4g %10.4g %8.4f %8.4f %8.4f %10.4f\n",
                  r.dataset.c_str(), r.method.c_str(), r.C1, r.C2, r.cv_mae, r.test.mae,
                  r.test.mse, r.train_seconds);
    out << line;
  }
  for (const auto& r : results)
    out << '\n' << r.dataset << " / " << r.method << '\n' << format_report(r.test);
  return out.str();
}

std::string trace_columns(const ConvergenceTrace& trace) {
  std::ostringstream out;
  char line[80];
  for (const auto& s : trace.samples) {
    std::snprintf(line, sizeof line, "%.6f %.6e\n", s.seconds, s.relative);
    out << line;
  }
  return out.str();
}

}  // namespace npsvor
