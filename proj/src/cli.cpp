#include "npsvor/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "npsvor/bench.hpp"
#include "npsvor/error.hpp"
#include "npsvor/eval.hpp"
#include "npsvor/log.hpp"
#include "npsvor/model.hpp"
#include "npsvor/textfeat.hpp"

namespace npsvor {

namespace {

namespace fs = std::filesystem;

struct SolverFlags {
  std::string solver = "npsvor-dcd2";
  double c = 1.0;
  double c2 = 1.0;
  CLI::Option* c2_option = nullptr;
  double eps = 0.1;
  double eps_stop = 0.1;
  double bias = 1.0;
  std::string predictor = "new";
  std::uint64_t seed = 1;
  int jobs = 1;
  int max_sweeps = 1000;
  bool no_shrinking = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool with_solver = true) {
  if (with_solver)
    cmd->add_option("-s,--solver", f.solver,
                    "npsvor-dcd1, npsvor-dcd2, svc, svr or redsvm")
        ->capture_default_str();
  cmd->add_option("-c,--cost", f.c, "cost C; sets C1 = C2")->capture_default_str();
  f.c2_option = cmd->add_option("--c2", f.c2, "overrides C2 (also accepted as -c2)");
  cmd->add_option("-p,--epsilon", f.eps, "insensitive zone epsilon")->capture_default_str();
  cmd->add_option("-t,--tolerance", f.eps_stop, "relative stopping tolerance")
      ->capture_default_str();
  cmd->add_option("-B,--bias", f.bias, "bias feature value; <= 0 disables it")
      ->capture_default_str();
  cmd->add_option("-r,--predictor", f.predictor, "old or new")->capture_default_str();
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  cmd->add_option("--jobs", f.jobs, "worker threads")->capture_default_str();
  cmd->add_option("--max-sweeps", f.max_sweeps, "sweep cap per dual problem")
      ->capture_default_str();
  cmd->add_flag("--no-shrinking", f.no_shrinking, "disable shrinking");
}

SolverConfig solver_config(const SolverFlags& f) {
  SolverConfig cfg;
  cfg.C1 = f.c;
  cfg.C2 = f.c2_option && f.c2_option->count() ? f.c2 : f.c;
  cfg.eps = f.eps;
  cfg.eps_stop = f.eps_stop;
  cfg.shrinking = !f.no_shrinking;
  cfg.max_sweeps = f.max_sweeps;
  cfg.seed = f.seed;
  if (f.jobs < 1) throw ValidationError("--jobs must be at least 1");
  cfg.validate();
  return cfg;
}

std::optional<double> bias_of(const SolverFlags& f) {
  if (f.bias > 0.0) return f.bias;
  return std::nullopt;
}

std::string echo(const SolverFlags& f, const SolverConfig& cfg) {
  char line[320];
  std::snprintf(line, sizeof line,
                "config: solver=%s C1=%.12g C2=%.12g eps=%.12g eps_stop=%.12g bias=%.12g "
                "predictor=%s shrinking=%d max_sweeps=%d seed=%llu jobs=%d",
                f.solver.c_str(), cfg.C1, cfg.C2, cfg.eps, cfg.eps_stop, f.bias,
                f.predictor.c_str(), cfg.shrinking ? 1 : 0, cfg.max_sweeps,
                static_cast<unsigned long long>(cfg.seed), f.jobs);
  return line;
}

void require_file(const std::string& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError("no such file: " + path);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

class Records {
 public:
  explicit Records(const std::string& path) {
    if (!path.empty()) out_ = open_output(path);
  }
  void add(const nlohmann::json& record) {
    if (out_.is_open()) out_ << record.dump() << '\n';
  }

 private:
  std::ofstream out_;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError("bad number '" + item + "' in list");
    values.push_back(v);
  }
  if (values.empty()) throw UsageError("empty list");
  return values;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) names.push_back(item);
  return names;
}

// ---- featurize --------------------------------------------------------------

struct FeaturizeFlags {
  std::string input;
  std::string output;
  std::string vocab_out;
  std::string vocab_in;
  TextOptions text;
  bool no_stopwords = false;
  bool no_bigrams = false;
  int jobs = 1;
};

int cmd_featurize(const FeaturizeFlags& f, std::ostream& out) {
  std::error_code ec;
  if (!fs::exists(f.input, ec)) throw IoError("no such file or directory: " + f.input);
  const auto corpus =
      fs::is_directory(f.input, ec) ? load_scale_dataset(f.input) : load_corpus_tsv(f.input);
  TextOptions options = f.text;
  options.remove_stopwords = !f.no_stopwords;
  options.bigrams = !f.no_bigrams;
  if (!(options.max_df > 0.0 && options.max_df <= 1.0))
    throw ValidationError("--max-df must be in (0, 1]");

  const Vocabulary vocab = f.vocab_in.empty() ? build_vocab(corpus, options) : load_vocab(f.vocab_in);
  log_info("documents " + std::to_string(corpus.size()) + ", vocabulary " +
           std::to_string(vocab.size()));
  RawDataset raw = vectorize_corpus(corpus, vocab, f.jobs);
  const SparseDataset data = make_dataset(std::move(raw));
  save_libsvm(data, f.output);
  if (!f.vocab_out.empty()) save_vocab(vocab, f.vocab_out);
  out << "featurized " << data.n() << " documents into " << vocab.size() << " features\n";
  return kExitOk;
}

// ---- train / predict ---------------------------------------------------------

int cmd_train(const SolverFlags& f, const std::string& data_path, const std::string& model_path,
              std::ostream& out) {
  const SolverConfig cfg = solver_config(f);
  const SolverKind kind = parse_solver(f.solver);
  const Predictor predictor = parse_predictor(f.predictor);
  log_info(echo(f, cfg));
  require_file(data_path);
  const SparseDataset data = load_libsvm(data_path, bias_of(f));
  const AnyModel model = train_model(kind, data, cfg, predictor, f.jobs);
  save_model(model, kind, model_path);
  out << "trained " << to_string(kind) << " on " << data.n() << " instances, " << data.p
      << " ranks\n";
  return kExitOk;
}

int cmd_predict(const std::string& predictor_flag, const std::string& model_path,
                const std::string& test_path, const std::string& output_path,
                const std::string& report_path, std::ostream& out) {
  require_file(model_path);
  require_file(test_path);
  const LoadedModel loaded = load_model(model_path);
  const ModelMeta& meta = meta_of(loaded.model);
  Predictor predictor = Predictor::new_rule;
  if (const auto* m = std::get_if<OrdinalModel>(&loaded.model)) predictor = m->predictor;
  if (!predictor_flag.empty()) predictor = parse_predictor(predictor_flag);

  const RawDataset test = read_libsvm(test_path);
  std::map<std::int64_t, int> rank_of_label;
  for (int k = 1; k <= meta.p; ++k) rank_of_label[meta.original_label(k)] = k;

  std::ofstream pred = open_output(output_path);
  std::vector<int> truth, predicted;
  bool all_known = true;
  for (std::size_t i = 0; i < test.rows.size(); ++i) {
    const SparseVector x = prepare_row(test.rows[i], meta.raw_feature_count(), meta.bias);
    const int rank = predict_rank(loaded.model, x, predictor);
    pred << meta.original_label(rank) << '\n';
    predicted.push_back(rank);
    const auto it = rank_of_label.find(test.labels[i]);
    if (it == rank_of_label.end()) all_known = false;
    else truth.push_back(it->second);
  }
  if (!pred) throw IoError("write failed: " + output_path);

  if (!test.rows.empty() && all_known) {
    const EvalReport report = evaluate(truth, predicted, meta.p);
    out << format_report(report);
    if (!report_path.empty()) open_output(report_path) << to_json(report).dump(2) << '\n';
  } else if (!all_known) {
    log_warning("test labels outside the model's label set; no evaluation report");
  }
  return kExitOk;
}

// ---- cv ----------------------------------------------------------------------

struct CvFlags {
  int folds = 5;
  std::string grid;
  bool grid2d = false;
  std::string records;
};

int cmd_cv(const SolverFlags& f, const CvFlags& cv, const std::string& data_path,
           std::ostream& out) {
  const SolverConfig cfg = solver_config(f);
  const SolverKind kind = parse_solver(f.solver);
  const Predictor predictor = parse_predictor(f.predictor);
  if (cv.folds < 2) throw ValidationError("-v needs at least 2 folds");
  const bool search = !cv.grid.empty();
  const Log2Range range = search ? Log2Range::parse(cv.grid) : Log2Range{};
  log_info(echo(f, cfg));
  require_file(data_path);
  const SparseDataset data = load_libsvm(data_path, bias_of(f));
  const Learner learner = make_learner(kind, predictor, 1);
  Records records(cv.records);

  if (!search) {
    const CvResult r = cross_validate(data, learner, cfg, cv.folds, cfg.seed, f.jobs);
    char line[160];
    std::snprintf(line, sizeof line, "%d-fold CV  MAE %.4f +- %.4f  MSE %.4f +- %.4f\n", cv.folds,
                  r.mae_mean, r.mae_std, r.mse_mean, r.mse_std);
    out << line;
    records.add(to_json(GridCell{cfg.C1, cfg.C2, r}));
    return kExitOk;
  }
  const bool ordinal = kind == SolverKind::npsvor_dcd1 || kind == SolverKind::npsvor_dcd2;
  const auto cells = cv.grid2d && ordinal ? full_grid(range, range) : tied_grid(range);
  const GridResult result = grid_search(data, learner, cells, cfg, cv.folds, cfg.seed, f.jobs);
  out << format_grid(result);
  for (const auto& cell : result.cells) records.add(to_json(cell));
  const GridCell& best = result.best_cell();
  char line[160];
  std::snprintf(line, sizeof line, "best C1=%.6g C2=%.6g MAE=%.4f\n", best.C1, best.C2,
                best.cv.mae_mean);
  out << line;
  return kExitOk;
}

// ---- bench -------------------------------------------------------------------

struct BenchFlags {
  std::vector<std::string> data;
  std::string synthetic;
  std::string records;
  double test_fraction = 0.3;
  // convergence
  int rank = 1;
  double reference_tol = 1.0e-10;
  double trace_tol = 1.0e-6;
  double target = 1.0e-3;
  std::string trace_dir;
  // epsilon
  std::string eps_grid = "0,0.1,0.2,0.3,0.4,0.5";
  int repeats = 1;
  // predictors
  bool geometry = false;
  int draws = 20;
  // methods
  std::string methods = "npsvor-dcd2,svc,svr,redsvm";
  std::string grid = "-5:1:5";
  int folds = 5;
  bool grid2d = false;
  // synth
  std::string output;
};

SparseDataset bench_dataset(const BenchFlags& b, const SolverFlags& f) {
  if (!b.synthetic.empty() && !b.data.empty())
    throw UsageError("give either --data or --synthetic, not both");
  if (!b.synthetic.empty()) {
    require_file(b.synthetic);
    return generate_synthetic(SyntheticConfig::load(b.synthetic));
  }
  if (b.data.size() != 1) throw UsageError("this bench needs exactly one --data or --synthetic");
  require_file(b.data.front());
  return load_libsvm(b.data.front(), bias_of(f));
}

int bench_convergence_cmd(const BenchFlags& b, const SolverFlags& f, std::ostream& out) {
  const SolverConfig cfg = solver_config(f);
  log_info(echo(f, cfg));
  const SparseDataset data = bench_dataset(b, f);
  ConvergenceOptions options;
  options.rank = b.rank;
  options.reference_eps_stop = b.reference_tol;
  options.trace_eps_stop = b.trace_tol;
  const ConvergenceResult result = bench_convergence(data, cfg, options);
  out << format_convergence(result, b.target);
  Records records(b.records);
  records.add(to_json(result.dcd1));
  records.add(to_json(result.dcd2));
  if (!b.trace_dir.empty()) {
    fs::create_directories(b.trace_dir);
    open_output((fs::path(b.trace_dir) / "npsvor-dcd1.txt").string()) << trace_columns(result.dcd1);
    open_output((fs::path(b.trace_dir) / "npsvor-dcd2.txt").string()) << trace_columns(result.dcd2);
  }
  return kExitOk;
}

int bench_epsilon_cmd(const BenchFlags& b, const SolverFlags& f, std::ostream& out) {
  const SolverConfig cfg = solver_config(f);
  const auto grid = parse_list(b.eps_grid);
  for (double e : grid)
    if (e < 0.0) throw ValidationError("epsilon grid values must be >= 0");
  log_info(echo(f, cfg));
  const SparseDataset data = bench_dataset(b, f);
  const auto [train_set, test_set] = stratified_split(data, b.test_fraction, cfg.seed);
  const auto rows = bench_epsilon(train_set, test_set, grid, cfg, b.repeats);
  out << format_epsilon(rows);
  Records records(b.records);
  for (const auto& r : rows) records.add(to_json(r));
  return kExitOk;
}

int bench_predictors_cmd(const BenchFlags& b, const SolverFlags& f, std::ostream& out) {
  const SolverConfig cfg = solver_config(f);
  log_info(echo(f, cfg));
  Records records(b.records);
  auto record = [&](const std::string& source, const PredictorComparison& c) {
    records.add({{"record", "predictors"},
                 {"source", source},
                 {"old", to_json(c.old_rule)},
                 {"new", to_json(c.new_rule)}});
  };
  if (b.geometry) {
    const PredictorGeometry g = PredictorGeometry::standard();
    const OrdinalModel model = train(g.sample(g.train_seed), cfg, 1).model;
    for (const auto& probe : g.probes) {
      const SparseVector x = g.probe_row(probe);
      char line[160];
      std::snprintf(line, sizeof line, "probe (%.3f, %.3f) rank %d: old %d, new %d\n",
                    probe.point[0], probe.point[1], probe.rank, predict_old(model, x),
                    predict_new(model, x));
      out << line;
    }
    for (int d = 0; d < b.draws; ++d) {
      const std::uint64_t s = derive_seed(cfg.seed, static_cast<std::uint64_t>(d));
      const PredictorComparison c = bench_predictors(g.sample(s), g.sample(s + 1), cfg);
      record("geometry", c);
      char line[160];
      std::snprintf(line, sizeof line, "draw %2d  MAE old %.4f new %.4f\n", d, c.old_rule.mae,
                    c.new_rule.mae);
      out << line;
    }
    return kExitOk;
  }
  const SparseDataset data = bench_dataset(b, f);
  const auto [train_set, test_set] = stratified_split(data, b.test_fraction, cfg.seed);
  const PredictorComparison c = bench_predictors(train_set, test_set, cfg);
  out << format_predictors(c);
  record(b.synthetic.empty() ? b.data.front() : b.synthetic, c);
  return kExitOk;
}

int bench_methods_cmd(const BenchFlags& b, const SolverFlags& f, std::ostream& out) {
  const SolverConfig cfg = solver_config(f);
  const Log2Range grid = Log2Range::parse(b.grid);
  if (b.folds < 2) throw ValidationError("-v needs at least 2 folds");
  std::vector<MethodSpec> methods;
  for (const auto& name : split_names(b.methods)) {
    MethodSpec m;
    m.kind = parse_solver(name);
    m.predictor = parse_predictor(f.predictor);
    m.separate_c2 = b.grid2d;
    methods.push_back(m);
  }
  if (methods.empty()) throw UsageError("--methods is empty");
  if (b.data.empty() && b.synthetic.empty()) throw UsageError("bench methods needs --data");
  log_info(echo(f, cfg));

  std::vector<NamedSplit> splits;
  std::vector<std::string> sources = b.data;
  if (!b.synthetic.empty()) sources.push_back(b.synthetic);
  for (const auto& path : sources) {
    require_file(path);
    const SparseDataset data = path == b.synthetic
                                   ? generate_synthetic(SyntheticConfig::load(path))
                                   : load_libsvm(path, bias_of(f));
    auto [train_set, test_set] = stratified_split(data, b.test_fraction, cfg.seed);
    splits.push_back({fs::path(path).stem().string(), std::move(train_set), std::move(test_set)});
  }
  const auto results = bench_methods(splits, methods, grid, cfg, b.folds, cfg.seed, f.jobs);
  out << format_methods(results);
  Records records(b.records);
  for (const auto& r : results) records.add(to_json(r));
  return kExitOk;
}

int bench_synth_cmd(const BenchFlags& b, std::ostream& out) {
  if (b.synthetic.empty()) throw UsageError("bench synth needs --synthetic");
  require_file(b.synthetic);
  const SparseDataset data = generate_synthetic(SyntheticConfig::load(b.synthetic));
  save_libsvm(data, b.output);
  out << "wrote " << data.n() << " instances to " << b.output << '\n';
  return kExitOk;
}

// "-c2" is a single-dash long flag by convention; CLI11 would read it as -c 2.
std::vector<std::string> normalize_args(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "-c2" || a.rfind("-c2=", 0) == 0) a = "-" + a;
    args.push_back(std::move(a));
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  return args;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear nonparallel support vector ordinal regression", "npsvor"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML/INI file; flags take precedence");
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "only warnings and errors on stderr");

  FeaturizeFlags feat;
  auto* featurize = app.add_subcommand("featurize", "text corpus to TF-IDF LIBSVM rows");
  featurize->add_option("input", feat.input, "label<TAB>text file or scale dataset directory")
      ->required();
  featurize->add_option("output", feat.output, "LIBSVM output")->required();
  featurize->add_option("--vocab-out", feat.vocab_out, "write the vocabulary here");
  featurize->add_option("--vocab", feat.vocab_in, "reuse an existing vocabulary");
  featurize->add_flag("--stem", feat.text.stem, "Porter stemming");
  featurize->add_flag("--no-stopwords", feat.no_stopwords, "keep stopwords");
  featurize->add_flag("--no-bigrams", feat.no_bigrams, "unigrams only");
  featurize->add_option("--min-count", feat.text.min_count, "minimum term occurrences")
      ->capture_default_str();
  featurize->add_option("--max-df", feat.text.max_df, "maximum document frequency fraction")
      ->capture_default_str();
  featurize->add_option("--min-length", feat.text.min_length, "minimum token length")
      ->capture_default_str();
  featurize->add_option("--jobs", feat.jobs, "worker threads")->capture_default_str();

  SolverFlags train_flags;
  std::string train_data, train_model_path;
  auto* train_cmd = app.add_subcommand("train", "train a model");
  add_solver_flags(train_cmd, train_flags);
  train_cmd->add_option("data", train_data, "LIBSVM training file")->required();
  train_cmd->add_option("model", train_model_path, "model output")->required();

  std::string predict_rule, predict_model, predict_test, predict_out, predict_report;
  auto* predict_cmd = app.add_subcommand("predict", "predict ranks for a LIBSVM file");
  predict_cmd->add_option("-r,--predictor", predict_rule, "old or new; default: as stored");
  predict_cmd->add_option("--report", predict_report, "write the evaluation report as JSON");
  predict_cmd->add_option("model", predict_model, "model file")->required();
  predict_cmd->add_option("test", predict_test, "LIBSVM test file")->required();
  predict_cmd->add_option("output", predict_out, "one predicted label per line")->required();

  SolverFlags cv_solver;
  CvFlags cv_flags;
  std::string cv_data;
  auto* cv_cmd = app.add_subcommand("cv", "cross validation and grid search");
  add_solver_flags(cv_cmd, cv_solver);
  cv_cmd->add_option("-v,--folds", cv_flags.folds, "number of folds")->capture_default_str();
  cv_cmd->add_option("-g,--grid", cv_flags.grid, "log2 C grid lo:step:hi, e.g. -5:1:5");
  cv_cmd->add_flag("--grid2d", cv_flags.grid2d, "search C1 x C2 instead of C1 = C2");
  cv_cmd->add_option("--records", cv_flags.records, "JSON lines output");
  cv_cmd->add_option("data", cv_data, "LIBSVM file")->required();

  SolverFlags bench_solver;
  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "benchmarks");
  bench_cmd->require_subcommand(1);
  auto add_source = [&](CLI::App* c) {
    add_solver_flags(c, bench_solver, false);
    c->add_option("--data", bench.data, "LIBSVM file(s)");
    c->add_option("--synthetic", bench.synthetic, "synthetic generator config (JSON)");
    c->add_option("--records", bench.records, "JSON lines output");
    c->add_option("--test-fraction", bench.test_fraction, "held-out fraction per rank")
        ->capture_default_str();
  };
  auto* b_conv = bench_cmd->add_subcommand("convergence", "DCD-1 vs DCD-2 objective traces");
  add_source(b_conv);
  b_conv->add_option("--rank", bench.rank, "rank whose dual is traced")->capture_default_str();
  b_conv->add_option("--reference-tol", bench.reference_tol)->capture_default_str();
  b_conv->add_option("--trace-tol", bench.trace_tol)->capture_default_str();
  b_conv->add_option("--target", bench.target, "relative difference reported")
      ->capture_default_str();
  b_conv->add_option("--trace-dir", bench.trace_dir, "write seconds/relative columns here");
  auto* b_eps = bench_cmd->add_subcommand("epsilon", "epsilon sensitivity");
  add_source(b_eps);
  b_eps->add_option("--eps-grid", bench.eps_grid, "comma separated, must include 0")
      ->capture_default_str();
  b_eps->add_option("--repeats", bench.repeats, "timed repeats per value")->capture_default_str();
  auto* b_pred = bench_cmd->add_subcommand("predictors", "old vs new prediction rule");
  add_source(b_pred);
  b_pred->add_flag("--geometry", bench.geometry, "use the 2-D three-cluster family");
  b_pred->add_option("--draws", bench.draws, "draws of the 2-D family")->capture_default_str();
  auto* b_methods = bench_cmd->add_subcommand("methods", "grid search, retrain, test");
  add_source(b_methods);
  b_methods->add_option("--methods", bench.methods, "comma separated solvers")
      ->capture_default_str();
  b_methods->add_option("-g,--grid", bench.grid, "log2 C grid")->capture_default_str();
  b_methods->add_option("-v,--folds", bench.folds, "CV folds")->capture_default_str();
  b_methods->add_flag("--grid2d", bench.grid2d, "search C1 x C2 for NPSVOR");
  auto* b_synth = bench_cmd->add_subcommand("synth", "write a synthetic dataset");
  b_synth->add_option("--synthetic", bench.synthetic, "generator config (JSON)")->required();
  b_synth->add_option("output", bench.output, "LIBSVM output")->required();

  try {
    std::vector<std::string> args = normalize_args(argc, argv);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_log_level(quiet ? LogLevel::warning : LogLevel::info);
  try {
    if (*featurize) return cmd_featurize(feat, out);
    if (*train_cmd) return cmd_train(train_flags, train_data, train_model_path, out);
    if (*predict_cmd)
      return cmd_predict(predict_rule, predict_model, predict_test, predict_out, predict_report,
                         out);
    if (*cv_cmd) return cmd_cv(cv_solver, cv_flags, cv_data, out);
    if (*b_conv) return bench_convergence_cmd(bench, bench_solver, out);
    if (*b_eps) return bench_epsilon_cmd(bench, bench_solver, out);
    if (*b_pred) return bench_predictors_cmd(bench, bench_solver, out);
    if (*b_methods) return bench_methods_cmd(bench, bench_solver, out);
    if (*b_synth) return bench_synth_cmd(bench, out);
  } catch (const UsageError& e) {
    err << "npsvor: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "npsvor: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "npsvor: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "npsvor: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "npsvor: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace npsvor
