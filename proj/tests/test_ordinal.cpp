#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "npsvor/error.hpp"
#include "npsvor/ordinal.hpp"
#include "npsvor/random.hpp"
#include "oracle.hpp"

using namespace npsvor;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-12); }

double inf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

SolverConfig tight(double eps_stop, bool shrinking) {
  SolverConfig cfg;
  cfg.eps_stop = eps_stop;
  cfg.shrinking = shrinking;
  cfg.max_sweeps = 200000;
  return cfg;
}

}  // namespace

TEST_SUITE("ordinal") {

TEST_CASE("config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.C1 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.eps = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.eps_stop = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  CHECK(parse_predictor("old") == Predictor::old_rule);
  CHECK(to_string(Predictor::new_rule) == "new");
  CHECK_THROWS_AS(parse_predictor("newest"), UsageError);
}

TEST_CASE("both solvers agree with the reference dual solution") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const int p = 2 + static_cast<int>(seed % 3);
    const SparseDataset d = oracle::tiny_problem(seed, 20, 4, p);
    SolverConfig cfg = tight(1e-8, true);
    cfg.C1 = 0.5 + 0.25 * static_cast<double>(seed % 4);
    cfg.C2 = 1.5 - 0.25 * static_cast<double>(seed % 3);
    for (int k = 1; k <= p; ++k) {
      const auto ref = oracle::solve_rank_dual(d, k, cfg.C1, cfg.C2, cfg.eps);
      REQUIRE(ref.converged);
      const auto s2 = train_rank_dcd2(d, k, cfg);
      const auto s1 = train_rank_dcd1(d, k, cfg);
      const double f2 = dual_objective_dcd2(s2.state, d, k, cfg.eps);
      const double f1 = dual_objective_dcd1(s1.state, cfg.eps);
      CHECK(rel(f2, ref.objective) <= 1e-6);
      CHECK(rel(f1, ref.objective) <= 1e-6);
      CHECK(rel(f1, f2) <= 1e-6);
    }
  }
}

TEST_CASE("dual objective never increases across sweeps") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const SparseDataset d = oracle::tiny_problem(seed, 30, 5, 3);
    for (bool shrink : {false, true}) {
      const SolverConfig cfg = tight(1e-8, shrink);
      for (int k = 1; k <= d.p; ++k) {
        double previous = 0.0;  // objective at alpha = 0
        bool monotone = true;
        train_rank_dcd2(d, k, cfg, [&](int, const DualStateDCD2& s) {
          const double f = dual_objective_dcd2(s, d, k, cfg.eps);
          if (f > previous + 1e-12) monotone = false;
          previous = f;
        });
        CHECK(monotone);
      }
    }
  }
}

TEST_CASE("maintained weights equal recomputed weights") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const SparseDataset d = oracle::tiny_problem(seed, 30, 5, 4);
    const SolverConfig cfg = tight(1e-3, true);
    for (int k = 1; k <= d.p; ++k) {
      const auto s2 = train_rank_dcd2(d, k, cfg);
      CHECK(inf_diff(s2.state.w, weight_from_duals(d, k, s2.state.alpha)) <= 1e-6);
      const auto s1 = train_rank_dcd1(d, k, cfg);
      CHECK(inf_diff(s1.state.w, weight_from_duals(d, k, s1.state.merged(d.n()))) <= 1e-6);
    }
  }
}

TEST_CASE("dual variables stay feasible and DCD-1 pairs are complementary") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const SparseDataset d = oracle::tiny_problem(seed, 30, 5, 3);
    SolverConfig cfg = tight(1e-8, true);
    cfg.C1 = 0.7;
    cfg.C2 = 1.3;
    for (int k = 1; k <= d.p; ++k) {
      const auto s2 = train_rank_dcd2(d, k, cfg);
      for (std::size_t i = 0; i < d.n(); ++i) {
        if (d.labels[i] == k) {
          CHECK(std::fabs(s2.state.alpha[i]) <= cfg.C1);
        } else {
          CHECK(s2.state.alpha[i] >= 0.0);
          CHECK(s2.state.alpha[i] <= cfg.C2);
        }
      }
      const auto s1 = train_rank_dcd1(d, k, cfg);
      for (std::size_t j = 0; j < s1.state.middle.size(); ++j)
        CHECK(s1.state.alpha_plus[j] * s1.state.alpha_minus[j] <= 1e-9);
    }
  }
}

TEST_CASE("shrinking changes the path but not the optimum") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const SparseDataset d = oracle::tiny_problem(seed, 30, 5, 3);
    for (int k = 1; k <= d.p; ++k) {
      const auto on = train_rank_dcd2(d, k, tight(1e-6, true));
      const auto off = train_rank_dcd2(d, k, tight(1e-6, false));
      CHECK(rel(dual_objective_dcd2(on.state, d, k, 0.1), dual_objective_dcd2(off.state, d, k, 0.1)) <= 1e-4);
    }
  }
}

TEST_CASE("instance order only moves the solution within tolerance") {
  const SparseDataset d = oracle::tiny_problem(77, 30, 5, 4);
  for (int k = 1; k <= d.p; ++k) {
    SolverConfig a = tight(1e-6, true);
    SolverConfig b = a;
    b.seed = 999;
    const double fa = dual_objective_dcd2(train_rank_dcd2(d, k, a).state, d, k, a.eps);
    const double fb = dual_objective_dcd2(train_rank_dcd2(d, k, b).state, d, k, b.eps);
    CHECK(rel(fa, fb) <= 1e-3);
  }
}

TEST_CASE("training is independent of the thread count") {
  const SparseDataset d = oracle::tiny_problem(5, 30, 5, 4);
  const SolverConfig cfg = tight(1e-4, true);
  const NpsvorFit one = train(d, cfg, 1);
  const NpsvorFit four = train(d, cfg, 4);
  CHECK(one.model.weights == four.model.weights);
  REQUIRE(one.ranks.size() == 4);
  for (const auto& r : one.ranks) CHECK(r.support_vectors <= d.n());
}

TEST_CASE("prediction rules on hand-made hyperplanes") {
  OrdinalModel model;
  model.meta.p = 3;
  model.meta.m = 2;
  model.meta.bias = 1.0;
  model.meta.label_map = {1, 2, 3};
  // f_k(x) = x - k, bias in the second column
  model.weights = {{1.0, -1.0}, {1.0, -2.0}, {1.0, -3.0}};
  auto row = [](double x) { return SparseVector::from_entries({{0, x}, {1, 1.0}}); };
  CHECK(predict_old(model, row(1.1)) == 1);
  CHECK(predict_old(model, row(2.4)) == 2);
  CHECK(predict_old(model, row(9.0)) == 3);
  CHECK(predict_new(model, row(1.4)) == 1);
  CHECK(predict_new(model, row(1.6)) == 2);
  CHECK(predict_new(model, row(2.6)) == 3);
  CHECK(predict(model, row(2.6), Predictor::old_rule) == 3);
}

TEST_CASE("new rule is monotone along the common direction of parallel hyperplanes") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 3 + static_cast<int>(rng.below(4));
    OrdinalModel model;
    model.meta.p = p;
    model.meta.m = 3;
    model.meta.bias = 1.0;
    for (int k = 1; k <= p; ++k) model.meta.label_map.push_back(k);
    const double u[2] = {rng.normal(), rng.normal()};
    double offset = rng.uniform(2.0, 4.0);
    for (int k = 0; k < p; ++k) {
      const double c = rng.uniform(0.1, 3.0);
      model.weights.push_back({c * u[0], c * u[1], c * offset});
      offset -= rng.uniform(0.1, 2.0);
    }
    std::vector<std::pair<double, int>> seen;
    for (int s = 0; s < 200; ++s) {
      const double x[2] = {rng.normal() * 3.0, rng.normal() * 3.0};
      const auto row = SparseVector::from_entries({{0, x[0]}, {1, x[1]}, {2, 1.0}});
      seen.emplace_back(u[0] * x[0] + u[1] * x[1], predict_new(model, row));
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i].second >= seen[i - 1].second);
  }
}

}
