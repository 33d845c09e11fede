#include "npsvor/textfeat.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "npsvor/error.hpp"
#include "npsvor/parallel.hpp"
#include "npsvor/stopwords_data.hpp"

namespace npsvor {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (c < 128 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

// Direct transcription of Porter's reference algorithm; b[0..k] is the
// word, j marks the stem end after a successful ends().
class PorterStemmer {
 public:
  explicit PorterStemmer(std::string_view word) : b_(word), k_(static_cast<int>(word.size()) - 1) {}

  std::string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

  bool cons(int i) const {
    switch (at(i)) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 || !cons(i - 1);
      default: return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool double_cons(int i) const { return i >= 1 && at(i) == at(i - 1) && cons(i); }

  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char c = at(i);
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1), s.size()) != s)
      return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void replace_if_measured(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  // Tries each (suffix, replacement) pair in order; first matching suffix wins.
  void rules(std::initializer_list<std::pair<std::string_view, std::string_view>> table) {
    for (const auto& [suffix, replacement] : table) {
      if (ends(suffix)) {
        replace_if_measured(replacement);
        return;
      }
    }
  }

  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (at(k_ - 1) != 's') {
        --k_;
      }
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_cons(k_)) {
        --k_;
        const char c = at(k_);
        if (c == 'l' || c == 's' || c == 'z') ++k_;
      } else {
        j_ = k_;
        if (m() == 1 && cvc(k_)) set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  void step2() {
    if (k_ < 1) return;
    switch (at(k_ - 1)) {
      case 'a': rules({{"ational", "ate"}, {"tional", "tion"}}); break;
      case 'c': rules({{"enci", "ence"}, {"anci", "ance"}}); break;
      case 'e': rules({{"izer", "ize"}}); break;
      case 'l':
        rules({{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}});
        break;
      case 'o': rules({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}}); break;
      case 's':
        rules({{"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}});
        break;
      case 't': rules({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}}); break;
      case 'g': rules({{"logi", "log"}}); break;
      default: break;
    }
  }

  void step3() {
    switch (at(k_)) {
      case 'e': rules({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}}); break;
      case 'i': rules({{"iciti", "ic"}}); break;
      case 'l': rules({{"ical", "ic"}, {"ful", ""}}); break;
      case 's': rules({{"ness", ""}}); break;
      default: break;
    }
  }

  void step4() {
    if (k_ < 1) return;
    bool matched = false;
    switch (at(k_ - 1)) {
      case 'a': matched = ends("al"); break;
      case 'c': matched = ends("ance") || ends("ence"); break;
      case 'e': matched = ends("er"); break;
      case 'i': matched = ends("ic"); break;
      case 'l': matched = ends("able") || ends("ible"); break;
      case 'n': matched = ends("ant") || ends("ement") || ends("ment") || ends("ent"); break;
      case 'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) {
          matched = true;
        } else {
          matched = ends("ou");
        }
        break;
      case 's': matched = ends("ism"); break;
      case 't': matched = ends("ate") || ends("iti"); break;
      case 'u': matched = ends("ous"); break;
      case 'v': matched = ends("ive"); break;
      case 'z': matched = ends("ize"); break;
      default: break;
    }
    if (matched && m() > 1) k_ = j_;
  }

  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && double_cons(k_) && m() > 1) --k_;
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

std::unordered_set<std::string> parse_stopwords(std::string_view text) {
  std::unordered_set<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.insert(line.substr(first, last - first + 1));
  }
  return words;
}

}  // namespace

std::string porter_stem(std::string_view word) { return PorterStemmer(word).run(); }

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = parse_stopwords(embedded::kStopwords);
  return words;
}

std::string_view stopwords_version() { return embedded::kStopwordsVersion; }

std::vector<std::string> extract_terms(std::string_view text, const TextOptions& options) {
  std::vector<std::string> kept;
  for (auto& token : tokenize(text)) {
    if (options.remove_stopwords && default_stopwords().contains(token)) continue;
    if (options.stem) token = porter_stem(token);
    if (token.size() < options.min_length) continue;
    kept.push_back(std::move(token));
  }
  std::vector<std::string> terms = kept;
  if (options.bigrams)
    for (std::size_t i = 1; i < kept.size(); ++i)
      terms.push_back(kept[i - 1] + kBigramSeparator + kept[i]);
  return terms;
}

std::int32_t Vocabulary::find(const std::string& term) const {
  const auto it = index.find(term);
  return it == index.end() ? -1 : it->second;
}

Vocabulary build_vocab(const std::vector<LabeledDocument>& corpus, const TextOptions& options) {
  if (corpus.empty()) throw ValidationError("empty corpus");
  struct Counts {
    std::size_t total = 0;
    std::size_t df = 0;
    std::size_t last_doc = static_cast<std::size_t>(-1);
  };
  // std::map keeps terms in lexicographic order for index assignment.
  std::map<std::string, Counts> counts;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (auto& term : extract_terms(corpus[d].text, options)) {
      Counts& c = counts[std::move(term)];
      ++c.total;
      if (c.last_doc != d) {
        ++c.df;
        c.last_doc = d;
      }
    }
  }

  Vocabulary vocab;
  vocab.documents = corpus.size();
  vocab.options = options;
  const double n_docs = static_cast<double>(corpus.size());
  for (const auto& [term, c] : counts) {
    if (c.total < options.min_count) continue;
    if (static_cast<double>(c.df) / n_docs > options.max_df) continue;
    vocab.index.emplace(term, static_cast<std::int32_t>(vocab.terms.size()));
    vocab.terms.push_back(term);
    vocab.df.push_back(c.df);
  }
  if (vocab.terms.empty()) throw ValidationError("vocabulary is empty after pruning");
  return vocab;
}

SparseVector vectorize(std::string_view text, const Vocabulary& vocab) {
  std::map<std::int32_t, std::size_t> tf;
  for (const auto& term : extract_terms(text, vocab.options)) {
    const std::int32_t j = vocab.find(term);
    if (j >= 0) ++tf[j];
  }
  std::vector<FeatureNode> entries;
  entries.reserve(tf.size());
  double norm2 = 0.0;
  const double n_docs = static_cast<double>(vocab.documents);
  for (const auto& [j, count] : tf) {
    const double df = static_cast<double>(vocab.df[static_cast<std::size_t>(j)]);
    const double w = static_cast<double>(count) * (std::log((1.0 + n_docs) / (1.0 + df)) + 1.0);
    entries.push_back({j, w});
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& e : entries) e.value *= inv;
  }
  return SparseVector::from_entries(std::move(entries));
}

RawDataset vectorize_corpus(const std::vector<LabeledDocument>& corpus, const Vocabulary& vocab,
                            int jobs) {
  RawDataset raw;
  raw.rows.resize(corpus.size());
  raw.labels.reserve(corpus.size());
  for (const auto& doc : corpus) raw.labels.push_back(doc.label);
  parallel_for(corpus.size(), jobs,
               [&](std::size_t d) { raw.rows[d] = vectorize(corpus[d].text, vocab); });
  raw.feature_count = vocab.size();
  return raw;
}

void write_vocab(const Vocabulary& vocab, std::ostream& out) {
  const TextOptions& o = vocab.options;
  char header[256];
  std::snprintf(header, sizeof header,
                "#npsvor-vocab 1 documents=%zu stem=%d stopwords=%d bigrams=%d min_count=%zu "
                "max_df=%.17g min_length=%zu\n",
                vocab.documents, o.stem ? 1 : 0, o.remove_stopwords ? 1 : 0, o.bigrams ? 1 : 0,
                o.min_count, o.max_df, o.min_length);
  out << header;
  for (std::size_t j = 0; j < vocab.terms.size(); ++j)
    out << vocab.terms[j] << '\t' << j << '\t' << vocab.df[j] << '\n';
}

void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_vocab(vocab, out);
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

template <class T>
T parse_number(std::string_view text, const std::string& what) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("vocabulary: bad " + what + " '" + std::string(text) + "'");
  return v;
}

}  // namespace

Vocabulary read_vocab(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("vocabulary: missing header");
  std::istringstream hs(line);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != "#npsvor-vocab" || version != "1")
    throw ValidationError("vocabulary: unsupported header '" + line + "'");

  Vocabulary vocab;
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ValidationError("vocabulary: bad header field " + field);
    const std::string key = field.substr(0, eq);
    const std::string_view value = std::string_view(field).substr(eq + 1);
    TextOptions& o = vocab.options;
    if (key == "documents") vocab.documents = parse_number<std::size_t>(value, key);
    else if (key == "stem") o.stem = parse_number<int>(value, key) != 0;
    else if (key == "stopwords") o.remove_stopwords = parse_number<int>(value, key) != 0;
    else if (key == "bigrams") o.bigrams = parse_number<int>(value, key) != 0;
    else if (key == "min_count") o.min_count = parse_number<std::size_t>(value, key);
    else if (key == "max_df") o.max_df = parse_number<double>(value, key);
    else if (key == "min_length") o.min_length = parse_number<std::size_t>(value, key);
    else throw ValidationError("vocabulary: unknown header field " + key);
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ValidationError("vocabulary line " + std::to_string(line_no) + ": expected 3 fields");
    std::string term = line.substr(0, t1);
    const auto idx = parse_number<std::size_t>(std::string_view(line).substr(t1 + 1, t2 - t1 - 1),
                                               "index");
    const auto df = parse_number<std::size_t>(std::string_view(line).substr(t2 + 1), "df");
    if (idx != vocab.terms.size())
      throw ValidationError("vocabulary line " + std::to_string(line_no) +
                            ": indices must be contiguous from 0");
    vocab.index.emplace(term, static_cast<std::int32_t>(idx));
    vocab.terms.push_back(std::move(term));
    vocab.df.push_back(df);
  }
  if (vocab.terms.empty()) throw ValidationError("vocabulary is empty");
  return vocab;
}

Vocabulary load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_vocab(in);
}

std::vector<LabeledDocument> read_corpus_tsv(std::istream& in, const std::string& source) {
  std::vector<LabeledDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ValidationError(source + ":" + std::to_string(line_no) + ": expected label<TAB>text");
    LabeledDocument doc;
    const std::string_view label = std::string_view(line).substr(0, tab);
    auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), doc.label);
    if (ec != std::errc() || ptr != label.data() + label.size())
      throw ValidationError(source + ":" + std::to_string(line_no) + ": bad label '" +
                            std::string(label) + "'");
    doc.text = line.substr(tab + 1);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<LabeledDocument> load_corpus_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_corpus_tsv(in, path.string());
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::vector<LabeledDocument> load_scale_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("not a directory: " + root.string());
  std::vector<fs::path> authors;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("subj.", 0) == 0) authors.push_back(entry.path());
  }
  if (authors.empty()) throw IoError("no subj.<author> files under " + root.string());
  std::sort(authors.begin(), authors.end());

  std::vector<LabeledDocument> docs;
  for (const auto& subj : authors) {
    const std::string author = subj.filename().string().substr(5);
    const fs::path labels_path = subj.parent_path() / ("label.4class." + author);
    const auto texts = read_lines(subj);
    const auto labels = read_lines(labels_path);
    if (texts.size() != labels.size())
      throw ValidationError(subj.string() + ": " + std::to_string(texts.size()) +
                            " reviews but " + std::to_string(labels.size()) + " labels");
    for (std::size_t i = 0; i < texts.size(); ++i) {
      LabeledDocument doc;
      doc.label = parse_number<std::int64_t>(labels[i], "label");
      doc.text = texts[i];
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

}  // namespace npsvor
