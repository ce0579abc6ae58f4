#pragma once

#include <cstdint>
#include <vector>

#include "dissim/dichotomy.hpp"

namespace dissim {

struct CondensedSet {
  std::vector<DissimilaritySample> samples;  // subset of the source, in source order
  std::vector<std::size_t> kept_indices;     // strictly increasing indices into the source
};

/// Condensed Nearest Neighbors over the dissimilarity space (Euclidean
/// distance on all dimensions). The store starts with the first sample of
/// each label in a seed-determined scan order; repeated passes add any sample
/// the current store 1-NN-misclassifies, until a full pass adds nothing. The
/// result 1-NN-classifies every source sample correctly. 1-NN ties break on
/// the lowest source index. Raises DataError on empty or single-label input.
CondensedSet condense(const std::vector<DissimilaritySample>& samples, std::uint64_t seed);

}  // namespace dissim
