#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "npsvor/error.hpp"
#include "npsvor/random.hpp"
#include "npsvor/textfeat.hpp"

using namespace npsvor;

namespace {

TextOptions plain() {
  TextOptions o;
  o.remove_stopwords = false;
  o.bigrams = false;
  return o;
}

std::vector<LabeledDocument> docs(std::initializer_list<const char*> texts) {
  std::vector<LabeledDocument> out;
  std::int64_t label = 0;
  for (const char* t : texts) out.push_back({label++ % 3, t});
  return out;
}

std::vector<LabeledDocument> random_corpus(std::uint64_t seed, std::size_t n) {
  static const char* words[] = {"plot", "acting", "great", "bad", "film", "story", "music",
                                "dull", "bright", "cast", "scene", "ending", "slow", "fun",
                                "the", "and", "not", "x"};
  Rng rng(seed);
  std::vector<LabeledDocument> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    const std::size_t len = 3 + rng.below(12);
    for (std::size_t j = 0; j < len; ++j) {
      text += words[rng.below(std::size(words))];
      text += j % 4 == 3 ? ". " : " ";
    }
    out.push_back({static_cast<std::int64_t>(rng.below(4)), text});
  }
  return out;
}

double norm2(const SparseVector& v) { return std::sqrt(v.squared_norm()); }

}  // namespace

TEST_SUITE("textfeat") {

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("Hello, World!! it's 2nd-rate") ==
        std::vector<std::string>{"hello", "world", "it", "s", "2nd", "rate"});
  CHECK(tokenize("  ...  ").empty());
}

TEST_CASE("porter stemmer reference vectors") {
  const std::pair<const char*, const char*> cases[] = {
      {"caresses", "caress"}, {"ponies", "poni"},       {"ties", "ti"},
      {"caress", "caress"},   {"cats", "cat"},          {"feed", "feed"},
      {"agreed", "agre"},     {"plastered", "plaster"}, {"motoring", "motor"},
      {"sing", "sing"},       {"conflated", "conflat"}, {"troubled", "troubl"},
      {"sized", "size"},      {"hopping", "hop"},       {"tanned", "tan"},
      {"falling", "fall"},    {"hissing", "hiss"},      {"fizzed", "fizz"},
      {"failing", "fail"},    {"filing", "file"},       {"happy", "happi"},
      {"sky", "sky"},         {"relational", "relat"},  {"conditional", "condit"},
      {"rational", "ration"}, {"valenci", "valenc"},    {"digitizer", "digit"},
      {"operator", "oper"},   {"feudalism", "feudal"},  {"decisiveness", "decis"},
      {"hopefulness", "hope"}, {"callousness", "callous"}, {"formaliti", "formal"},
      {"triplicate", "triplic"}, {"formative", "form"},  {"formalize", "formal"},
      {"electrical", "electr"}, {"hopeful", "hope"},     {"goodness", "good"},
      {"revival", "reviv"},   {"allowance", "allow"},   {"inference", "infer"},
      {"airliner", "airlin"}, {"adjustable", "adjust"}, {"defensible", "defens"},
      {"irritant", "irrit"},  {"replacement", "replac"}, {"adoption", "adopt"},
      {"homologou", "homolog"}, {"communism", "commun"}, {"activate", "activ"},
      {"angulariti", "angular"}, {"effective", "effect"}, {"bowdlerize", "bowdler"},
      {"probate", "probat"},  {"rate", "rate"},         {"cease", "ceas"},
      {"controll", "control"}, {"roll", "roll"},        {"generalizations", "gener"},
      {"oscillators", "oscil"}, {"a", "a"},             {"is", "is"}};
  for (const auto& [word, stem] : cases) {
    CAPTURE(word);
    CHECK(porter_stem(word) == stem);
  }
}

TEST_CASE("shipped stopword list") {
  const auto& sw = default_stopwords();
  CHECK(sw.size() >= 100);
  CHECK(sw.size() <= 200);
  CHECK(sw.count("the") == 1);
  CHECK(sw.count("and") == 1);
  CHECK(sw.count("not") == 0);
  CHECK(stopwords_version() == "en-v1");
}

TEST_CASE("extract_terms forms bigrams over the filtered stream") {
  TextOptions o;
  const auto terms = extract_terms("The plot is not good", o);
  CHECK(std::find(terms.begin(), terms.end(), "plot") != terms.end());
  CHECK(std::find(terms.begin(), terms.end(), "the") == terms.end());
  CHECK(std::find(terms.begin(), terms.end(), std::string("not") + kBigramSeparator + "good") != terms.end());
  CHECK(std::find(terms.begin(), terms.end(), std::string("plot") + kBigramSeparator + "not") != terms.end());
  o.bigrams = false;
  for (const auto& t : extract_terms("The plot is not good", o)) CHECK(t.find(kBigramSeparator) == std::string::npos);
  o.stem = true;
  const auto stemmed = extract_terms("running dogs", o);
  CHECK(stemmed == std::vector<std::string>{"run", "dog"});
}

TEST_CASE("a term in every document is pruned by the document-frequency rule") {
  TextOptions o = plain();
  o.min_count = 1;
  const Vocabulary v = build_vocab(docs({"good film", "good cast", "good tone", "plain"}), o);
  CHECK(v.find("good") == -1);  // 3 of 4 documents
  CHECK(build_vocab(docs({"good film", "good cast", "good plot"}), o).find("good") == -1);
  CHECK(v.find("film") >= 0);
  o.max_df = 1.0;
  CHECK(build_vocab(docs({"good film", "good film", "good film"}), o).find("good") >= 0);
}

TEST_CASE("single-character tokens are pruned by the length rule") {
  TextOptions o = plain();
  o.min_count = 1;
  o.max_df = 1.0;
  const Vocabulary v = build_vocab(docs({"a film", "a cast", "a plot"}), o);
  CHECK(v.find("a") == -1);
  CHECK(v.find("film") >= 0);
}

TEST_CASE("terms seen fewer than three times are pruned") {
  TextOptions o = plain();
  o.max_df = 1.0;
  const Vocabulary v = build_vocab(docs({"rare film", "rare film", "film plot", "plot plot"}), o);
  CHECK(v.find("rare") == -1);
  CHECK(v.find("film") >= 0);
  CHECK(v.find("plot") >= 0);
}

TEST_CASE("vocabulary indices are contiguous and sorted") {
  const Vocabulary v = build_vocab(random_corpus(1, 80), TextOptions{});
  REQUIRE(v.size() > 0);
  CHECK(std::is_sorted(v.terms.begin(), v.terms.end()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    CHECK(v.find(v.terms[j]) == static_cast<std::int32_t>(j));
    CHECK(v.terms[j].size() >= 2);
    CHECK(static_cast<double>(v.df[j]) <= 0.5 * static_cast<double>(v.documents));
  }
  CHECK_THROWS_AS(build_vocab({}, TextOptions{}), ValidationError);
  CHECK_THROWS_AS(build_vocab(docs({"x y"}), TextOptions{}), ValidationError);
}

TEST_CASE("vectorize examples") {
  TextOptions o = plain();
  o.min_count = 1;
  o.max_df = 1.0;
  const Vocabulary v = build_vocab(docs({"film plot", "film cast", "plot cast"}), o);
  CHECK(vectorize("nothing known here", v).empty());
  const SparseVector one = vectorize("film", v);
  REQUIRE(one.nnz() == 1);
  CHECK(one.entries()[0].value == doctest::Approx(1.0));
  const SparseVector two = vectorize("film plot", v);  // equal tf, equal df
  REQUIRE(two.nnz() == 2);
  CHECK(two.entries()[0].value == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(two.entries()[1].value == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("tf-idf weights follow the smoothed formula") {
  TextOptions o = plain();
  o.min_count = 1;
  o.max_df = 1.0;
  const Vocabulary v = build_vocab(docs({"film plot", "film cast", "film"}), o);
  const SparseVector x = vectorize("film film plot", v);
  const double idf_film = std::log(4.0 / 4.0) + 1.0;
  const double idf_plot = std::log(4.0 / 2.0) + 1.0;
  const double a = 2.0 * idf_film, b = 1.0 * idf_plot, n = std::hypot(a, b);
  REQUIRE(x.nnz() == 2);
  CHECK(x.entries()[v.find("film") < v.find("plot") ? 0 : 1].value == doctest::Approx(a / n));
}

TEST_CASE("rows have unit norm and do not depend on corpus order") {
  auto corpus = random_corpus(2, 120);
  const Vocabulary v = build_vocab(corpus, TextOptions{});
  const RawDataset d = vectorize_corpus(corpus, v, 3);
  for (const auto& row : d.rows)
    if (!row.empty()) CHECK(norm2(row) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  std::vector<LabeledDocument> reversed;
  for (std::size_t i : order) reversed.push_back(corpus[i]);
  const RawDataset r = vectorize_corpus(reversed, v, 1);
  for (std::size_t i = 0; i < order.size(); ++i) CHECK(r.rows[i] == d.rows[order[i]]);
  CHECK(d.feature_count == v.size());
}

TEST_CASE("vocabulary on a duplicated corpus") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto corpus = random_corpus(seed, 60);
    auto doubled = corpus;
    doubled.insert(doubled.end(), corpus.begin(), corpus.end());
    TextOptions unpruned;
    unpruned.min_count = 1;
    unpruned.max_df = 1.0;
    const Vocabulary all = build_vocab(corpus, unpruned);
    const Vocabulary once = build_vocab(corpus, TextOptions{});
    const Vocabulary twice = build_vocab(doubled, TextOptions{});
    CHECK(twice.documents == 2 * once.documents);
    // Document-frequency ratios are unchanged; counts double, so terms seen
    // exactly twice now pass the count rule as well.
    std::set<std::string> expected;
    std::map<std::string, std::size_t> count;
    for (const auto& doc : corpus)
      for (const auto& t : extract_terms(doc.text, unpruned)) ++count[t];
    for (std::size_t j = 0; j < all.size(); ++j) {
      const std::string& t = all.terms[j];
      if (2 * count[t] >= 3 && 2.0 * all.df[j] <= 0.5 * 2.0 * all.documents) expected.insert(t);
    }
    CHECK(std::set<std::string>(twice.terms.begin(), twice.terms.end()) == expected);
    for (std::size_t j = 0; j < once.size(); ++j) {
      const std::int32_t k = twice.find(once.terms[j]);
      REQUIRE(k >= 0);
      CHECK(twice.df[static_cast<std::size_t>(k)] == 2 * once.df[j]);
    }
  }
}

TEST_CASE("vocabulary file round trip") {
  const Vocabulary v = build_vocab(random_corpus(3, 50), TextOptions{});
  std::stringstream s;
  write_vocab(v, s);
  const Vocabulary back = read_vocab(s);
  CHECK(back.terms == v.terms);
  CHECK(back.df == v.df);
  CHECK(back.documents == v.documents);
  CHECK(back.options.bigrams == v.options.bigrams);
  std::istringstream bad("#npsvor-vocab 9\n");
  CHECK_THROWS_AS(read_vocab(bad), ValidationError);
}

TEST_CASE("corpus tsv reader") {
  std::istringstream in("2\tgood film\n0\tbad\tfilm\n");
  const auto c = read_corpus_tsv(in, "mem");
  REQUIRE(c.size() == 2);
  CHECK(c[1].label == 0);
  CHECK(c[1].text == "bad\tfilm");
  std::istringstream bad("two\tgood\n");
  CHECK_THROWS_AS(read_corpus_tsv(bad, "mem"), ValidationError);
}

}
