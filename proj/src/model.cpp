#include "npsvor/model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "npsvor/error.hpp"

namespace npsvor {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::npsvor_dcd1: return "npsvor-dcd1";
    case SolverKind::npsvor_dcd2: return "npsvor-dcd2";
    case SolverKind::svc: return "svc";
    case SolverKind::svr: return "svr";
    case SolverKind::redsvm: return "redsvm";
  }
  return "unknown";
}

SolverKind parse_solver(std::string_view name) {
  for (auto kind : {SolverKind::npsvor_dcd1, SolverKind::npsvor_dcd2, SolverKind::svc,
                    SolverKind::svr, SolverKind::redsvm})
    if (name == to_string(kind)) return kind;
  throw UsageError("unknown solver '" + std::string(name) + "'");
}

const ModelMeta& meta_of(const AnyModel& model) {
  return std::visit([](const auto& m) -> const ModelMeta& { return m.meta; }, model);
}

AnyModel train_model(SolverKind kind, const SparseDataset& data, const SolverConfig& cfg,
                     Predictor predictor, int jobs) {
  switch (kind) {
    case SolverKind::npsvor_dcd1:
    case SolverKind::npsvor_dcd2: {
      SolverConfig c = cfg;
      c.algorithm = kind == SolverKind::npsvor_dcd1 ? Algorithm::dcd1 : Algorithm::dcd2;
      OrdinalModel model = train(data, c, jobs).model;
      model.predictor = predictor;
      return model;
    }
    case SolverKind::svc: return train_svc_ova(data, cfg, jobs).model;
    case SolverKind::svr: return train_svr(data, cfg).model;
    case SolverKind::redsvm: return train_redsvm(data, cfg).model;
  }
  throw UsageError("unknown solver");
}

int predict_rank(const AnyModel& model, const SparseVector& x, Predictor predictor) {
  struct Visitor {
    const SparseVector& x;
    Predictor predictor;
    int operator()(const OrdinalModel& m) const { return predict(m, x, predictor); }
    int operator()(const OvaModel& m) const { return predict_svc_ova(m, x); }
    int operator()(const SvrModel& m) const { return predict_svr(m, x); }
    int operator()(const RedSvmModel& m) const { return predict_redsvm(m, x); }
  };
  return std::visit(Visitor{x, predictor}, model);
}

namespace {

std::string format_real(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

void write_vector(std::ostream& out, const std::vector<double>& v) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) out << ' ';
    out << format_real(v[j]);
  }
  out << '\n';
}

}  // namespace

void write_model(const AnyModel& model, SolverKind kind, std::ostream& out) {
  const ModelMeta& meta = meta_of(model);
  out << "npsvor-model 1\n";
  out << "solver " << to_string(kind) << '\n';
  out << "ranks " << meta.p << '\n';
  out << "features " << meta.m << '\n';
  out << "bias " << (meta.bias ? format_real(*meta.bias) : std::string("none")) << '\n';
  out << "labels";
  for (auto l : meta.label_map) out << ' ' << l;
  out << '\n';

  std::vector<const std::vector<double>*> vectors;
  const std::vector<double>* thresholds = nullptr;
  if (const auto* m = std::get_if<OrdinalModel>(&model)) {
    out << "predictor " << to_string(m->predictor) << '\n';
    for (const auto& w : m->weights) vectors.push_back(&w);
  } else if (const auto* o = std::get_if<OvaModel>(&model)) {
    for (const auto& w : o->weights) vectors.push_back(&w);
  } else if (const auto* s = std::get_if<SvrModel>(&model)) {
    vectors.push_back(&s->w);
  } else if (const auto* r = std::get_if<RedSvmModel>(&model)) {
    vectors.push_back(&r->w);
    thresholds = &r->thresholds;
  }
  out << "vectors " << vectors.size() << '\n';
  for (const auto* v : vectors) write_vector(out, *v);
  if (thresholds) {
    out << "thresholds " << thresholds->size() << '\n';
    write_vector(out, *thresholds);
  }
  out << "end\n";
}

void save_model(const AnyModel& model, SolverKind kind, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_model(model, kind, out);
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  // Reads "key rest-of-line" and checks the key.
  std::string expect(std::string_view key) {
    std::string line;
    if (!next_line(line)) fail("unexpected end of file, expected '" + std::string(key) + "'");
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != key) fail("expected '" + std::string(key) + "', got '" + word + "'");
    std::string rest;
    std::getline(ss, rest);
    const auto first = rest.find_first_not_of(' ');
    return first == std::string::npos ? std::string{} : rest.substr(first);
  }

  std::vector<double> reals(std::size_t expected) {
    std::string line;
    if (!next_line(line)) fail("missing vector line");
    std::vector<double> out;
    out.reserve(expected);
    std::istringstream ss(line);
    std::string token;
    while (ss >> token) out.push_back(parse_real(token));
    if (out.size() != expected)
      fail("expected " + std::to_string(expected) + " values, got " + std::to_string(out.size()));
    return out;
  }

  double parse_real(const std::string& token) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
      fail("bad real '" + token + "'");
    return v;
  }

  long long parse_integer(const std::string& token) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) fail("bad integer '" + token + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("model file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  bool next_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
  }

  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

LoadedModel read_model(std::istream& in) {
  ModelReader r(in);
  if (r.expect("npsvor-model") != "1") r.fail("unsupported model format version");
  const SolverKind kind = parse_solver(r.expect("solver"));

  ModelMeta meta;
  meta.p = static_cast<int>(r.parse_integer(r.expect("ranks")));
  const long long m = r.parse_integer(r.expect("features"));
  if (meta.p < 2 || m < 0) r.fail("invalid model shape");
  meta.m = static_cast<std::size_t>(m);
  const std::string bias = r.expect("bias");
  if (bias != "none") meta.bias = r.parse_real(bias);
  {
    std::istringstream ss(r.expect("labels"));
    std::string token;
    while (ss >> token) meta.label_map.push_back(r.parse_integer(token));
    if (meta.label_map.size() != static_cast<std::size_t>(meta.p)) r.fail("label count != ranks");
  }

  Predictor predictor = Predictor::new_rule;
  const bool ordinal = kind == SolverKind::npsvor_dcd1 || kind == SolverKind::npsvor_dcd2;
  if (ordinal) predictor = parse_predictor(r.expect("predictor"));

  const auto count = static_cast<std::size_t>(r.parse_integer(r.expect("vectors")));
  const std::size_t wanted =
      (kind == SolverKind::svr || kind == SolverKind::redsvm) ? 1 : static_cast<std::size_t>(meta.p);
  if (count != wanted) r.fail("unexpected vector count for solver");
  std::vector<std::vector<double>> vectors;
  for (std::size_t i = 0; i < count; ++i) vectors.push_back(r.reals(meta.m));

  LoadedModel loaded{kind, OrdinalModel{}};
  switch (kind) {
    case SolverKind::npsvor_dcd1:
    case SolverKind::npsvor_dcd2:
      loaded.model = OrdinalModel{meta, std::move(vectors), predictor};
      break;
    case SolverKind::svc:
      loaded.model = OvaModel{meta, std::move(vectors)};
      break;
    case SolverKind::svr:
      loaded.model = SvrModel{meta, std::move(vectors.front())};
      break;
    case SolverKind::redsvm: {
      const auto t = static_cast<std::size_t>(r.parse_integer(r.expect("thresholds")));
      if (t != static_cast<std::size_t>(meta.p - 1)) r.fail("threshold count != ranks - 1");
      loaded.model = RedSvmModel{meta, std::move(vectors.front()), r.reals(t)};
      break;
    }
  }
  r.expect("end");
  return loaded;
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_model(in);
}

}  // namespace npsvor
