#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "npsvor/cli.hpp"
#include "npsvor/log.hpp"
#include "npsvor/sparse.hpp"
#include "oracle.hpp"

using namespace npsvor;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "npsvor");
  args.insert(args.begin() + 1, "--quiet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("npsvor-cli-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const SparseDataset d = oracle::tiny_problem(41, 90, 6, 4);
    save_libsvm(d, dir / "train.txt");
    save_libsvm(oracle::tiny_problem(42, 40, 6, 4), dir / "test.txt");
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::size_t lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  Workspace ws;
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"train", "--bogus", ws / "train.txt", ws / "m"}).code == kExitUsage);
  CHECK(cli({"train", "-s", "lasso", ws / "train.txt", ws / "m"}).code == kExitUsage);
  CHECK(cli({"train", ws / "missing.txt", ws / "m"}).code == kExitIo);
  CHECK(cli({"train", "-c", "-1", ws / "train.txt", ws / "m"}).code == kExitValidation);
  CHECK(cli({"cv", "-g", "1:0:2", ws / "train.txt"}).code == kExitUsage);
  std::ofstream(ws / "broken.txt") << "1 0:1\n";
  const Result broken = cli({"train", ws / "broken.txt", ws / "m"});
  CHECK(broken.code == kExitValidation);
  CHECK(broken.err.find("broken.txt") != std::string::npos);
}

TEST_CASE("train then predict") {
  Workspace ws;
  for (const char* solver : {"npsvor-dcd2", "npsvor-dcd1", "svc", "svr", "redsvm"}) {
    CAPTURE(solver);
    REQUIRE(cli({"train", "-s", solver, "-t", "0.01", ws / "train.txt", ws / "model"}).code == kExitOk);
    const Result r = cli({"predict", "--report", ws / "report.json", ws / "model", ws / "test.txt", ws / "pred"});
    REQUIRE(r.code == kExitOk);
    CHECK(lines(slurp(ws / "pred")) == 40);
    CHECK(r.out.find("MAE") != std::string::npos);
    CHECK(slurp(ws / "report.json").find("\"mae\"") != std::string::npos);
  }
}

TEST_CASE("single-dash c2 sets only C2") {
  Workspace ws;
  REQUIRE(cli({"train", "-c", "2", "-c2", "0.5", ws / "train.txt", ws / "a"}).code == kExitOk);
  REQUIRE(cli({"train", "-c", "2", "--c2", "0.5", ws / "train.txt", ws / "b"}).code == kExitOk);
  REQUIRE(cli({"train", "-c", "2", ws / "train.txt", ws / "c"}).code == kExitOk);
  CHECK(slurp(ws / "a") == slurp(ws / "b"));
  CHECK(slurp(ws / "a") != slurp(ws / "c"));
}

TEST_CASE("flags take precedence over the config file") {
  Workspace ws;
  std::ofstream(ws / "cfg.toml") << "[train]\nsolver = \"svr\"\n";
  REQUIRE(cli({"--config", ws / "cfg.toml", "train", ws / "train.txt", ws / "m1"}).code == kExitOk);
  CHECK(slurp(ws / "m1").find("solver svr") != std::string::npos);
  REQUIRE(cli({"--config", ws / "cfg.toml", "train", "-s", "svc", ws / "train.txt", ws / "m2"}).code == kExitOk);
  CHECK(slurp(ws / "m2").find("solver svc") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  Workspace ws;
  for (int i = 0; i < 2; ++i) {
    const std::string tag = std::to_string(i);
    REQUIRE(cli({"train", "--seed", "5", "--jobs", i == 0 ? "1" : "3", ws / "train.txt", ws / ("m" + tag)}).code == kExitOk);
    REQUIRE(cli({"predict", ws / ("m" + tag), ws / "test.txt", ws / ("p" + tag)}).code == kExitOk);
  }
  CHECK(slurp(ws / "m0") == slurp(ws / "m1"));
  CHECK(slurp(ws / "p0") == slurp(ws / "p1"));
}

TEST_CASE("bias switch") {
  Workspace ws;
  REQUIRE(cli({"train", "-B", "-1", ws / "train.txt", ws / "m"}).code == kExitOk);
  CHECK(slurp(ws / "m").find("bias none") != std::string::npos);
  REQUIRE(cli({"predict", ws / "m", ws / "test.txt", ws / "p"}).code == kExitOk);
}

TEST_CASE("featurize writes rows and a reusable vocabulary") {
  Workspace ws;
  {
    std::ofstream c(ws / "corpus.tsv");
    const char* texts[] = {"a great film with a great cast", "dull plot and a dull cast",
                           "great music but slow plot", "slow and dull film",
                           "bright cast great fun", "fun music bright ending"};
    for (int rep = 0; rep < 3; ++rep)
      for (int i = 0; i < 6; ++i) c << (i % 3) << '\t' << texts[i] << ' ' << texts[(i + rep) % 6] << '\n';
  }
  const Result r = cli({"featurize", "--vocab-out", ws / "vocab", ws / "corpus.tsv", ws / "rows"});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(slurp(ws / "rows")) == 18);
  CHECK(slurp(ws / "vocab").rfind("#npsvor-vocab 1", 0) == 0);
  REQUIRE(cli({"featurize", "--vocab", ws / "vocab", ws / "corpus.tsv", ws / "rows2"}).code == kExitOk);
  CHECK(slurp(ws / "rows") == slurp(ws / "rows2"));
  CHECK(cli({"featurize", "--max-df", "0", ws / "corpus.tsv", ws / "x"}).code == kExitValidation);
  CHECK(cli({"featurize", ws / "nope.tsv", ws / "x"}).code == kExitIo);
}

TEST_CASE("cv and bench subcommands run") {
  Workspace ws;
  Result r = cli({"cv", "-v", "3", "-g", "-1:1:1", "--records", ws / "cv.jsonl", ws / "train.txt"});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(slurp(ws / "cv.jsonl")) == 3);
  std::ofstream(ws / "synth.json") << R"({"version":1,"n":300,"m":100,"avg_nnz":8,"ranks":3,"seed":4})";
  REQUIRE(cli({"bench", "synth", "--synthetic", ws / "synth.json", ws / "synth.txt"}).code == kExitOk);
  CHECK(lines(slurp(ws / "synth.txt")) == 300);
  r = cli({"bench", "epsilon", "--synthetic", ws / "synth.json", "--eps-grid", "0,0.3"});
  CHECK(r.code == kExitOk);
  CHECK(cli({"bench", "epsilon", "--synthetic", ws / "synth.json", "--eps-grid", "0,-1"}).code == kExitValidation);
  r = cli({"bench", "convergence", "--data", ws / "train.txt", "--trace-dir", ws / "traces"});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(ws.dir / "traces"));
  r = cli({"bench", "predictors", "--geometry", "--draws", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("probe") != std::string::npos);
  r = cli({"bench", "methods", "--data", ws / "train.txt", "--methods", "npsvor-dcd2,svr", "-g", "0:1:0", "-v", "2"});
  CHECK(r.code == kExitOk);
}

}
