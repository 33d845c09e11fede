#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "npsvor/sparse.hpp"

namespace npsvor {

struct TextOptions {
  bool stem = false;
  bool remove_stopwords = true;
  bool bigrams = true;
  std::size_t min_count = 3;   // total occurrences across the corpus
  double max_df = 0.5;         // fraction of documents
  std::size_t min_length = 2;  // characters, per token
};

// Joins the two tokens of a bigram. Tokens are alphanumeric only.
inline constexpr char kBigramSeparator = '_';

// Lowercased alphanumeric runs; everything else separates tokens.
std::vector<std::string> tokenize(std::string_view text);

// Porter (1980) suffix stripping. Expects a lowercase ASCII word.
std::string porter_stem(std::string_view word);

// The shipped English list.
const std::unordered_set<std::string>& default_stopwords();
std::string_view stopwords_version();

// Unigrams followed by adjacent bigrams, after stemming and filtering.
// Bigrams are formed over the filtered token stream.
std::vector<std::string> extract_terms(std::string_view text, const TextOptions& options);

struct LabeledDocument {
  std::int64_t label = 0;
  std::string text;
};

struct Vocabulary {
  std::vector<std::string> terms;  // sorted; position is the feature index
  std::unordered_map<std::string, std::int32_t> index;
  std::vector<std::size_t> df;     // documents containing terms[j]
  std::size_t documents = 0;
  TextOptions options;

  std::size_t size() const { return terms.size(); }
  // -1 if absent.
  std::int32_t find(const std::string& term) const;
};

Vocabulary build_vocab(const std::vector<LabeledDocument>& corpus, const TextOptions& options);

// tf = raw count, idf = ln((1 + N) / (1 + df)) + 1, then unit L2 norm.
SparseVector vectorize(std::string_view text, const Vocabulary& vocab);
RawDataset vectorize_corpus(const std::vector<LabeledDocument>& corpus, const Vocabulary& vocab,
                            int jobs = 1);

// "#npsvor-vocab 1 documents=N stem=0|1 stopwords=0|1 bigrams=0|1 min_count=.. max_df=.. min_length=.."
// followed by "term<TAB>index<TAB>df" lines.
void write_vocab(const Vocabulary& vocab, std::ostream& out);
void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary read_vocab(std::istream& in);
Vocabulary load_vocab(const std::filesystem::path& path);

// One document per line: "<integer label><TAB><text>".
std::vector<LabeledDocument> read_corpus_tsv(std::istream& in, const std::string& source);
std::vector<LabeledDocument> load_corpus_tsv(const std::filesystem::path& path);

// Scale dataset layout: for each author directory below `root`,
// subj.<author> holds one review per line and label.4class.<author> the
// matching 0..3 rating. Authors are read in name order.
std::vector<LabeledDocument> load_scale_dataset(const std::filesystem::path& root);

}  // namespace npsvor
