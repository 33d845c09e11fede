#include "npsvor/sparse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "npsvor/error.hpp"
#include "npsvor/random.hpp"

namespace npsvor {

SparseVector::SparseVector(std::vector<FeatureNode> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) squared_norm_ += e.value * e.value;
}

SparseVector SparseVector::from_entries(std::vector<FeatureNode> entries) {
  std::erase_if(entries, [](const FeatureNode& e) { return e.value == 0.0; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index < 0)
      throw ValidationError("negative feature index " + std::to_string(entries[i].index));
    if (i > 0 && entries[i].index <= entries[i - 1].index)
      throw ValidationError("feature indices must be strictly increasing");
    if (!std::isfinite(entries[i].value)) throw ValidationError("non-finite feature value");
  }
  return SparseVector(std::move(entries));
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  std::vector<FeatureNode> entries;
  for (std::size_t j = 0; j < dense.size(); ++j)
    if (dense[j] != 0.0) entries.push_back({static_cast<std::int32_t>(j), dense[j]});
  return from_entries(std::move(entries));
}

double SparseVector::dot(std::span<const double> w) const {
  double sum = 0.0;
  const auto size = static_cast<std::int64_t>(w.size());
  for (const auto& e : entries_) {
    if (e.index >= size) break;
    sum += w[static_cast<std::size_t>(e.index)] * e.value;
  }
  return sum;
}

void SparseVector::axpy(double scale, std::span<double> w) const {
  const auto size = static_cast<std::int64_t>(w.size());
  for (const auto& e : entries_) {
    if (e.index >= size) break;
    w[static_cast<std::size_t>(e.index)] += scale * e.value;
  }
}

SparseVector SparseVector::truncated(std::size_t limit,
                                     std::optional<std::pair<std::size_t, double>> append) const {
  std::vector<FeatureNode> kept;
  kept.reserve(entries_.size() + 1);
  for (const auto& e : entries_) {
    if (static_cast<std::size_t>(e.index) >= limit) break;
    kept.push_back(e);
  }
  if (append && append->second != 0.0)
    kept.push_back({static_cast<std::int32_t>(append->first), append->second});
  return SparseVector(std::move(kept));
}

std::vector<std::size_t> SparseDataset::rank_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(p, 0)), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y - 1)];
  return counts;
}

SparseDataset SparseDataset::subset(std::span<const std::size_t> indices) const {
  SparseDataset out;
  out.m = m;
  out.p = p;
  out.bias = bias;
  out.label_map = label_map;
  out.rows.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    out.rows.push_back(rows.at(i));
    out.labels.push_back(labels.at(i));
  }
  return out;
}

void SparseDataset::validate() const {
  if (rows.size() != labels.size()) throw ValidationError("row and label counts differ");
  if (p < 2) throw ValidationError("need at least two ranks");
  if (label_map.size() != static_cast<std::size_t>(p))
    throw ValidationError("label map size does not match rank count");
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  for (int y : labels) {
    if (y < 1 || y > p) throw ValidationError("rank label out of range: " + std::to_string(y));
    seen[static_cast<std::size_t>(y - 1)] = true;
  }
  for (int k = 0; k < p; ++k)
    if (!seen[static_cast<std::size_t>(k)])
      throw ValidationError("rank " + std::to_string(k + 1) + " has no instances");
  for (const auto& row : rows) {
    if (row.extent() > m) throw ValidationError("feature index exceeds feature count");
    if (bias) {
      const auto e = row.entries();
      if (*bias != 0.0 && (e.empty() || static_cast<std::size_t>(e.back().index) != m - 1 ||
                           e.back().value != *bias))
        throw ValidationError("bias-augmented row lacks the bias feature");
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string& what) {
  throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

template <class T>
bool parse_number(std::string_view token, T& out) {
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

RawDataset parse_libsvm(std::istream& in, std::string_view source) {
  RawDataset raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;

    auto next_token = [&rest]() {
      rest = trim(rest);
      const auto cut = rest.find_first_of(" \t");
      std::string_view token = rest.substr(0, cut);
      rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut);
      return token;
    };

    const std::string_view label_token = next_token();
    double label = 0.0;
    if (!parse_number(label_token, label) || !std::isfinite(label))
      parse_fail(source, line_no, "non-numeric label '" + std::string(label_token) + "'");
    if (label != std::floor(label) || std::fabs(label) > 9.0e15)
      parse_fail(source, line_no, "label is not an integer: " + std::string(label_token));

    std::vector<FeatureNode> entries;
    std::int64_t previous = 0;
    while (!trim(rest).empty()) {
      const std::string_view token = next_token();
      const auto colon = token.find(':');
      if (colon == std::string_view::npos)
        parse_fail(source, line_no, "expected index:value, got '" + std::string(token) + "'");
      std::int64_t index = 0;
      double value = 0.0;
      if (!parse_number(token.substr(0, colon), index) || index < 1 || index > INT32_MAX)
        parse_fail(source, line_no, "bad feature index in '" + std::string(token) + "'");
      if (!parse_number(token.substr(colon + 1), value) || !std::isfinite(value))
        parse_fail(source, line_no, "bad feature value in '" + std::string(token) + "'");
      if (index <= previous) parse_fail(source, line_no, "feature indices must be increasing");
      previous = index;
      if (value != 0.0) entries.push_back({static_cast<std::int32_t>(index - 1), value});
    }
    raw.rows.push_back(SparseVector::from_entries(std::move(entries)));
    raw.labels.push_back(static_cast<std::int64_t>(label));
    raw.feature_count = std::max(raw.feature_count, raw.rows.back().extent());
  }
  return raw;
}

RawDataset read_libsvm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_libsvm(in, path.string());
}

SparseDataset make_dataset(RawDataset raw, std::optional<double> bias) {
  std::map<std::int64_t, int> ranks;
  for (auto y : raw.labels) ranks.emplace(y, 0);
  if (ranks.size() < 2)
    throw ValidationError("need at least two distinct labels, found " +
                          std::to_string(ranks.size()));

  SparseDataset data;
  int next = 1;
  for (auto& [label, rank] : ranks) {
    rank = next++;
    data.label_map.push_back(label);
  }
  data.p = static_cast<int>(ranks.size());
  data.m = raw.feature_count;
  data.rows = std::move(raw.rows);
  data.labels.reserve(raw.labels.size());
  for (auto y : raw.labels) data.labels.push_back(ranks.at(y));
  if (bias) data = augment_bias(std::move(data), *bias);
  data.validate();
  return data;
}

SparseDataset load_libsvm(const std::filesystem::path& path, std::optional<double> bias) {
  return make_dataset(read_libsvm(path), bias);
}

void write_libsvm(const SparseDataset& data, std::ostream& out) {
  const std::size_t limit = data.raw_feature_count();
  char buffer[64];
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << data.label_map.at(static_cast<std::size_t>(data.labels[i] - 1));
    for (const auto& e : data.rows[i].entries()) {
      if (static_cast<std::size_t>(e.index) >= limit) break;
      std::snprintf(buffer, sizeof buffer, " %d:%.17g", e.index + 1, e.value);
      out << buffer;
    }
    out << '\n';
  }
}

void save_libsvm(const SparseDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_libsvm(data, out);
  if (!out) throw IoError("write failed: " + path.string());
}

SparseDataset augment_bias(SparseDataset data, double bias) {
  if (data.bias) throw ValidationError("dataset is already bias-augmented");
  const std::size_t column = data.m;
  for (auto& row : data.rows) row = row.truncated(column, std::pair{column, bias});
  data.m = column + 1;
  data.bias = bias;
  return data;
}

SparseVector prepare_row(const SparseVector& row, std::size_t raw_feature_count,
                         std::optional<double> bias) {
  if (bias) return row.truncated(raw_feature_count, std::pair{raw_feature_count, *bias});
  return row.truncated(raw_feature_count);
}

std::pair<SparseDataset, SparseDataset> stratified_split(const SparseDataset& data,
                                                         double test_fraction,
                                                         std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ValidationError("test fraction must lie in (0, 1)");
  std::vector<std::vector<std::size_t>> by_rank(static_cast<std::size_t>(data.p));
  for (std::size_t i = 0; i < data.n(); ++i)
    by_rank[static_cast<std::size_t>(data.labels[i] - 1)].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t k = 0; k < by_rank.size(); ++k) {
    auto& members = by_rank[k];
    if (members.size() < 2)
      throw ValidationError("rank " + std::to_string(k + 1) +
                            " needs at least 2 instances to split");
    rng.shuffle(std::span(members));
    auto take = static_cast<std::size_t>(
        std::llround(static_cast<double>(members.size()) * test_fraction));
    take = std::clamp<std::size_t>(take, 1, members.size() - 1);
    test_idx.insert(test_idx.end(), members.begin(), members.begin() + static_cast<long>(take));
    train_idx.insert(train_idx.end(), members.begin() + static_cast<long>(take), members.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {data.subset(train_idx), data.subset(test_idx)};
}

RankDecomposition decompose(const SparseDataset& data, int k) {
  if (k < 1 || k > data.p)
    throw ValidationError("rank " + std::to_string(k) + " out of range 1.." +
                          std::to_string(data.p));
  RankDecomposition d;
  d.rank = k;
  d.signed_label.resize(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    const int y = data.labels[i];
    if (y < k)
      d.left.push_back(i);
    else if (y == k)
      d.middle.push_back(i);
    else
      d.right.push_back(i);
    d.signed_label[i] = y > k ? 1 : -1;
  }
  return d;
}

}  // namespace npsvor
