#include <doctest.h>

#include <sstream>

#include "npsvor/error.hpp"
#include "npsvor/model.hpp"
#include "oracle.hpp"

using namespace npsvor;

TEST_SUITE("model") {

TEST_CASE("solver names round trip") {
  for (SolverKind k : {SolverKind::npsvor_dcd1, SolverKind::npsvor_dcd2, SolverKind::svc,
                       SolverKind::svr, SolverKind::redsvm})
    CHECK(parse_solver(to_string(k)) == k);
  CHECK_THROWS_AS(parse_solver("lasso"), UsageError);
}

TEST_CASE("every model type reloads bit-exactly") {
  const SparseDataset d = oracle::tiny_problem(21, 30, 4, 3);
  SolverConfig cfg;
  cfg.eps_stop = 1e-3;
  for (SolverKind kind : {SolverKind::npsvor_dcd1, SolverKind::npsvor_dcd2, SolverKind::svc,
                          SolverKind::svr, SolverKind::redsvm}) {
    CAPTURE(to_string(kind));
    const AnyModel model = train_model(kind, d, cfg, Predictor::old_rule);
    std::stringstream text;
    write_model(model, kind, text);
    const std::string first = text.str();
    const LoadedModel back = read_model(text);
    CHECK(back.kind == kind);
    std::stringstream again;
    write_model(back.model, back.kind, again);
    CHECK(again.str() == first);
    for (const auto& row : d.rows)
      CHECK(predict_rank(back.model, row, Predictor::old_rule) ==
            predict_rank(model, row, Predictor::old_rule));
    CHECK(meta_of(back.model).label_map == d.label_map);
  }
}

TEST_CASE("stored predictor survives the round trip") {
  const SparseDataset d = oracle::tiny_problem(22, 20, 3, 3);
  const AnyModel model = train_model(SolverKind::npsvor_dcd2, d, {}, Predictor::old_rule);
  std::stringstream text;
  write_model(model, SolverKind::npsvor_dcd2, text);
  CHECK(text.str().find("predictor old") != std::string::npos);
  const LoadedModel back = read_model(text);
  CHECK(std::get<OrdinalModel>(back.model).predictor == Predictor::old_rule);
}

TEST_CASE("malformed model files are rejected") {
  for (const char* text : {"", "npsvor-model 2\n", "npsvor-model 1\nsolver nope\n",
                           "npsvor-model 1\nsolver svr\nranks 2\nfeatures 2\nbias none\nlabels 1 2\n"
                           "vectors 1\n0.5\nend\n"}) {
    std::istringstream in(text);
    CHECK_THROWS(read_model(in));
  }
}

}
