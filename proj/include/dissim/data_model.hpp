#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Core domain types and feature-file ingestion.
//
// Feature CSV schema: header `writer_id,label,sample_index,f0,...,f{D-1}`,
// label in {G, S}, UTF-8, LF line endings. Files ending in `.gz` are read and
// written gzip-compressed. Feature values are 64-bit doubles serialized in
// shortest round-trip decimal form, so write-then-load reproduces the exact
// bit patterns.

namespace dissim {

enum class Label : std::uint8_t { Genuine = 0, SkilledForgery = 1 };

// One signature: who wrote it, whether it is genuine or a skilled forgery of
// that writer, and its feature vector. "Random forgery" is never a stored
// label; it is a pairing role taken by a genuine signature of another writer.
struct SignatureRecord {
  std::int64_t writer_id = 0;  // >= 1
  Label label = Label::Genuine;
  std::int32_t sample_index = 0;  // >= 0, per (writer, label)
  std::vector<double> features;
};

class Dataset {
 public:
  Dataset(std::vector<SignatureRecord> records, std::size_t dim);

  const std::vector<SignatureRecord>& records() const { return records_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return records_.size(); }

  // Distinct writer ids present, ascending.
  const std::vector<std::int64_t>& writer_ids() const { return writer_ids_; }

  // Record indices (in record order) for one (writer, label) pair. Empty when
  // the writer has no such samples.
  const std::vector<std::size_t>& indices_of(std::int64_t writer, Label label) const;

 private:
  std::vector<SignatureRecord> records_;
  std::size_t dim_;
  std::vector<std::int64_t> writer_ids_;
  std::map<std::int64_t, std::vector<std::size_t>> genuine_index_;
  std::map<std::int64_t, std::vector<std::size_t>> skilled_index_;
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t opt = 0;
  std::size_t sel = 0;
  std::size_t exploitation = 0;
};

// Pairwise-disjoint writer subsets. The first four partition the development
// writers; exploitation writers hold the test set and never overlap them.
struct WriterSplit {
  std::vector<std::int64_t> train_writers;
  std::vector<std::int64_t> validation_writers;
  std::vector<std::int64_t> opt_writers;
  std::vector<std::int64_t> sel_writers;
  std::vector<std::int64_t> exploitation_writers;

  bool pairwise_disjoint() const;
};

/// Loads the feature CSV (optionally gzip-compressed). When expected_dim is
/// given, a header with a different dimensionality raises SchemaError.
/// Malformed rows raise ParseError naming the line.
Dataset load_feature_file(const std::string& path,
                          std::optional<std::size_t> expected_dim = std::nullopt);

void save_feature_file(const Dataset& dataset, const std::string& path);

/// Deterministic partition of the dataset's writers into the five subsets.
/// Pure function of (dataset.writer_ids(), counts, seed); counts that exceed
/// the available writers raise ConfigError.
WriterSplit split_writers(const Dataset& dataset, const SplitCounts& counts, std::uint64_t seed);

/// Deterministic k-subset (no duplicates) of one writer's samples of one
/// label. Raises DataError when fewer than k samples exist.
std::vector<SignatureRecord> select_samples(const Dataset& dataset, std::int64_t writer,
                                            Label label, std::size_t k, std::uint64_t seed);

}  // namespace dissim
