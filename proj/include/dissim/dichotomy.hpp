#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dissim/data_model.hpp"

// Dichotomy transformation: (questioned, reference) pairs become labeled
// dissimilarity vectors u[i] = |x_q[i] - x_r[i]|, turning writer verification
// into a two-class problem. Positive means "same writer, genuine questioned".

namespace dissim {

enum class PairLabel : std::uint8_t { Positive = 0, Negative = 1 };
enum class PairKind : std::uint8_t { GenuineVsRef = 0, SkilledVsRef = 1, RandomVsRef = 2 };

struct DissimilaritySample {
  std::vector<double> values;  // elementwise |x_q - x_r|, all >= 0
  PairLabel label = PairLabel::Negative;
  std::int64_t writer_id = 0;  // writer of the reference signature
  PairKind kind = PairKind::RandomVsRef;
};

// Enrolled genuine signatures of one writer.
struct ReferenceSet {
  std::int64_t writer_id = 0;
  std::vector<SignatureRecord> references;
};

/// Validating factory: at least one reference, all genuine, all of `writer`.
ReferenceSet make_reference_set(std::int64_t writer, std::vector<SignatureRecord> references);

/// u[i] = |questioned[i] - reference[i]|. Length mismatch raises DimensionError.
std::vector<double> dissimilarity(std::span<const double> questioned,
                                  std::span<const double> reference);

/// Max fusion of per-reference partial scores. Empty input raises UsageError.
double fuse_scores(std::span<const double> partial_scores);

/// Splits one writer's genuine samples into reference and questioned roles:
/// a seeded shuffle is consumed references-first, so the two sets are always
/// disjoint. Raises DataError when the writer has fewer than
/// n_references + n_questioned genuine samples.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> pick_genuine_roles(
    const Dataset& dataset, std::int64_t writer, std::size_t n_references,
    std::size_t n_questioned, std::uint64_t seed);

/// Builds the training set over `writers`: per writer, n_genuine questioned
/// genuines and n_random_forgery genuines of other writers, each paired
/// against that writer's n_references references. Skilled forgeries are never
/// used for training. Deterministic given seed; per-writer substreams make
/// the output independent of construction order.
std::vector<DissimilaritySample> build_training_set(const Dataset& dataset,
                                                    const std::vector<std::int64_t>& writers,
                                                    std::size_t n_references,
                                                    std::size_t n_genuine,
                                                    std::size_t n_random_forgery,
                                                    std::uint64_t seed);

}  // namespace dissim
