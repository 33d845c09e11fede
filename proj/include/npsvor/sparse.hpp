#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace npsvor {

struct FeatureNode {
  std::int32_t index;  // 0-based
  double value;

  friend bool operator==(const FeatureNode&, const FeatureNode&) = default;
};

// A compressed row. Indices are strictly increasing and no zero value is
// stored; the squared norm is cached at construction.
class SparseVector {
 public:
  SparseVector() = default;

  // Zero values are dropped. Throws ValidationError on negative or
  // non-increasing indices.
  static SparseVector from_entries(std::vector<FeatureNode> entries);
  static SparseVector from_dense(std::span<const double> dense);

  std::span<const FeatureNode> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double squared_norm() const { return squared_norm_; }
  // One past the largest stored index (0 for an empty row).
  std::size_t extent() const {
    return entries_.empty() ? 0 : static_cast<std::size_t>(entries_.back().index) + 1;
  }

  // Entries with index >= w.size() are ignored.
  double dot(std::span<const double> w) const;
  void axpy(double scale, std::span<double> w) const;

  // Keeps entries below `limit` and appends (position, value) when given.
  SparseVector truncated(std::size_t limit,
                         std::optional<std::pair<std::size_t, double>> append = {}) const;

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  explicit SparseVector(std::vector<FeatureNode> entries);

  std::vector<FeatureNode> entries_;
  double squared_norm_ = 0.0;
};

// Rows with their labels exactly as read from a LIBSVM file.
struct RawDataset {
  std::vector<SparseVector> rows;
  std::vector<std::int64_t> labels;
  std::size_t feature_count = 0;  // max index + 1
};

// Labels are ranks 1..p; label_map[k - 1] holds the original label of rank k.
// When bias is set, column m - 1 is the augmented constant feature.
struct SparseDataset {
  std::vector<SparseVector> rows;
  std::vector<int> labels;
  std::size_t m = 0;
  int p = 0;
  std::optional<double> bias;
  std::vector<std::int64_t> label_map;

  std::size_t n() const { return rows.size(); }
  bool bias_augmented() const { return bias.has_value(); }
  // Feature count without the bias column.
  std::size_t raw_feature_count() const { return bias ? m - 1 : m; }

  std::vector<std::size_t> rank_counts() const;
  // Rows and labels at `indices`, keeping m, p, bias and label_map.
  SparseDataset subset(std::span<const std::size_t> indices) const;
  // Throws ValidationError if any invariant is broken.
  void validate() const;
};

RawDataset parse_libsvm(std::istream& in, std::string_view source = "<stream>");
RawDataset read_libsvm(const std::filesystem::path& path);

// Remaps labels to consecutive ranks in numeric order and optionally appends
// the bias feature. Requires at least two distinct labels.
SparseDataset make_dataset(RawDataset raw, std::optional<double> bias = {});
SparseDataset load_libsvm(const std::filesystem::path& path, std::optional<double> bias = {});

// Writes original labels and the non-bias features with 1-based indices.
void write_libsvm(const SparseDataset& data, std::ostream& out);
void save_libsvm(const SparseDataset& data, const std::filesystem::path& path);

SparseDataset augment_bias(SparseDataset data, double bias);

// Maps a row from an external file into a model's feature space: drops
// indices the model has never seen and appends the bias feature.
SparseVector prepare_row(const SparseVector& row, std::size_t raw_feature_count,
                         std::optional<double> bias);

// Per rank, round(count * test_fraction) instances go to the test part,
// clamped so both parts keep at least one instance. Returns (train, test).
std::pair<SparseDataset, SparseDataset> stratified_split(const SparseDataset& data,
                                                         double test_fraction,
                                                         std::uint64_t seed);

struct RankDecomposition {
  int rank = 0;
  std::vector<std::size_t> left;    // y_i < k
  std::vector<std::size_t> middle;  // y_i == k
  std::vector<std::size_t> right;   // y_i > k
  std::vector<std::int8_t> signed_label;  // -1 iff y_i <= k
};

RankDecomposition decompose(const SparseDataset& data, int k);

}  // namespace npsvor
