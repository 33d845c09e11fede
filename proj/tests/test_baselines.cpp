#include <doctest.h>

#include <cmath>

#include "npsvor/baselines.hpp"
#include "npsvor/random.hpp"
#include "oracle.hpp"

using namespace npsvor;

namespace {

SolverConfig tight(double C, double eps_stop) {
  SolverConfig cfg;
  cfg.C1 = cfg.C2 = C;
  cfg.eps_stop = eps_stop;
  cfg.max_sweeps = 500000;
  return cfg;
}

// Three well separated blobs along a line, bias column appended.
SparseDataset separable_blobs() {
  Rng rng(8);
  RawDataset raw;
  raw.feature_count = 2;
  const double centers[3][2] = {{-4.0, 0.0}, {0.0, 4.0}, {4.0, 0.0}};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 15; ++i) {
      const double x[2] = {centers[c][0] + 0.3 * rng.normal(), centers[c][1] + 0.3 * rng.normal()};
      raw.rows.push_back(SparseVector::from_dense(x));
      raw.labels.push_back(c + 1);
    }
  return make_dataset(std::move(raw), 1.0);
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("one-vs-all separates separable blobs") {
  const SparseDataset d = separable_blobs();
  const OvaFit fit = train_svc_ova(d, tight(10.0, 1e-6));
  for (std::size_t i = 0; i < d.n(); ++i) CHECK(predict_svc_ova(fit.model, d.rows[i]) == d.labels[i]);
}

TEST_CASE("one-vs-all is invariant to a common positive rescaling") {
  const SparseDataset d = oracle::tiny_problem(4, 40, 4, 4);
  const OvaFit fit = train_svc_ova(d, tight(1.0, 1e-3));
  OvaModel scaled = fit.model;
  for (auto& w : scaled.weights)
    for (double& v : w) v *= 3.7;
  for (const auto& row : d.rows) CHECK(predict_svc_ova(scaled, row) == predict_svc_ova(fit.model, row));
}

TEST_CASE("SVR interior duals sit on the tube boundary") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SparseDataset d = oracle::tiny_problem(seed, 30, 5, 4);
    SolverConfig cfg = tight(0.5, 1e-10);
    cfg.eps = 0.2;
    const SvrFit fit = train_svr(d, cfg);
    for (std::size_t i = 0; i < d.n(); ++i) {
      const double b = std::fabs(fit.beta[i]);
      if (b > 1e-9 && b < cfg.C1 - 1e-9) {
        const double residual = std::fabs(d.rows[i].dot(fit.model.w) - d.labels[i]);
        CHECK(residual <= cfg.eps + 1e-6);
      }
    }
  }
}

TEST_CASE("round_to_rank rounds half away from zero and clamps") {
  CHECK(round_to_rank(2.5, 4) == 3);
  CHECK(round_to_rank(2.49, 4) == 2);
  CHECK(round_to_rank(-3.0, 4) == 1);
  CHECK(round_to_rank(17.0, 4) == 4);
}

TEST_CASE("RedSVM extension layout") {
  const SparseDataset d = oracle::tiny_problem(3, 10, 3, 3);
  const ExtendedDataset ext = extend_redsvm(d);
  CHECK(ext.rows.size() == d.n() * 2);
  CHECK(ext.features == d.m + 2);
  for (std::size_t i = 0; i < d.n(); ++i)
    for (int k = 1; k <= 2; ++k) {
      const std::size_t r = i * 2 + static_cast<std::size_t>(k - 1);
      CHECK((ext.labels[r] == 1) == (d.labels[i] > k));
      const auto e = ext.rows[r].entries();
      CHECK(e.back().index == static_cast<std::int32_t>(d.m) + k - 1);
      CHECK(e.back().value == -1.0);
    }
}

TEST_CASE("RedSVM binary problems share one weight vector") {
  const SparseDataset d = oracle::tiny_problem(6, 30, 4, 4);
  const SolverConfig cfg = tight(1.0, 1e-6);
  const RedSvmFit fit = train_redsvm(d, cfg);
  const ExtendedDataset ext = extend_redsvm(d);
  const BinarySolution sol =
      solve_binary_svc(ext.rows, ext.labels, ext.features, cfg.C1, cfg.limits(), derive_seed(cfg.seed, 0));
  REQUIRE(fit.model.thresholds.size() == 3);
  for (std::size_t j = 0; j < d.m; ++j) CHECK(fit.model.w[j] == sol.w[j]);
  for (std::size_t k = 0; k < 3; ++k) CHECK(fit.model.thresholds[k] == sol.w[d.m + k]);
  // every binary problem scores w^T x - theta_k with the same w
  for (std::size_t i = 0; i < d.n(); ++i)
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(ext.rows[i * 3 + k].dot(sol.w) ==
            doctest::Approx(d.rows[i].dot(fit.model.w) - fit.model.thresholds[k]).epsilon(1e-12));
  const int r = predict_redsvm(fit.model, d.rows[0]);
  CHECK(r >= 1);
  CHECK(r <= 4);
  (void)thresholds_ordered(fit.model);
}

TEST_CASE("baselines converge to long-run references") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SparseDataset d = oracle::tiny_problem(seed, 25, 4, 3);
    const SvrFit svr = train_svr(d, tight(1.0, 1e-6));
    const SvrFit svr_ref = train_svr(d, tight(1.0, 1e-12));
    const double fs = svr_objective(svr, d, 0.1);
    const double fr = svr_objective(svr_ref, d, 0.1);
    CHECK(std::fabs(fs - fr) <= 1e-5 * std::fabs(fr));

    std::vector<std::int8_t> y;
    for (int label : d.labels) y.push_back(label > 1 ? 1 : -1);
    const auto a = solve_binary_svc(d.rows, y, d.m, 1.0, {1e-6, 500000, true}, 1);
    const auto b = solve_binary_svc(d.rows, y, d.m, 1.0, {1e-12, 500000, false}, 2);
    CHECK(std::fabs(binary_svc_objective(a) - binary_svc_objective(b)) <=
          1e-5 * std::fabs(binary_svc_objective(b)));
  }
}

TEST_CASE("SVR objective never increases with tighter tolerance") {
  const SparseDataset d = oracle::tiny_problem(12, 25, 4, 3);
  double previous = 0.0;
  for (double tol : {1e-1, 1e-2, 1e-4, 1e-8}) {
    const double f = svr_objective(train_svr(d, tight(1.0, tol)), d, 0.1);
    CHECK(f <= previous + 1e-12);
    previous = f;
  }
}

}
