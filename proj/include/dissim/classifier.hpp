#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dissim/dichotomy.hpp"
#include "dissim/prototype_selection.hpp"

namespace dissim {

// Binary feature-selection mask over the D dissimilarity dimensions, packed
// 64 bits per word (bit i of the mask lives at word i/64, bit i%64).
class FeatureMask {
 public:
  FeatureMask() = default;
  explicit FeatureMask(std::size_t size, bool all_ones = false);
  static FeatureMask from_bits(const std::vector<bool>& bits);

  // Hex packing: bytes in ascending order, two lowercase hex digits each;
  // byte j carries bits 8j..8j+7, least significant bit first.
  static FeatureMask from_hex(std::string_view hex, std::size_t size);
  std::string to_hex() const;

  std::size_t size() const { return size_; }
  std::size_t cardinality() const { return cardinality_; }
  bool test(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  // Indices of the selected dimensions, ascending (int32 for the gather kernels).
  std::vector<std::int32_t> selected_indices() const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const FeatureMask& other) const {
    return size_ == other.size_ && words_ == other.words_;
  }

  // Lexicographic order over the bit string b0 b1 ... b{D-1} with 0 < 1.
  // Used as the final archive tie-break.
  static int compare_lex(const FeatureMask& a, const FeatureMask& b);

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
  std::size_t cardinality_ = 0;
};

// Extension point for kernelized backends. Only the linear machine is
// implemented; nonlinear kernels are out of scope.
enum class SvmKernel : std::uint8_t { Linear = 0 };

struct SvmHyper {
  double c = 1.0;  // hinge weight; the objective is ||w||^2/2 + (c/n) * sum hinge
  std::size_t max_epochs = 500;
  double tol = 1e-8;  // stop when the worst projected dual gradient falls below this
  std::uint64_t seed = 1;
  SvmKernel kernel = SvmKernel::Linear;
};

struct TrainedModel {
  std::vector<double> weights;  // one per selected dimension, ascending index order
  double bias = 0.0;
  FeatureMask mask;
  SvmHyper hyper;
  double objective = 0.0;  // primal objective at termination
  std::size_t epochs_run = 0;
};

/// Trains a linear max-margin classifier on the masked dimensions by dual
/// coordinate descent on the hinge loss. The loss term is averaged over
/// samples, so duplicating the training set leaves the optimum unchanged.
/// Deterministic given (samples, mask, hyper). Scores are
/// weights . x_masked + bias with higher meaning Positive.
/// Raises DegenerateMaskError on an all-zero mask and DataError when only one
/// label is present.
TrainedModel train(std::span<const DissimilaritySample> samples, const FeatureMask& mask,
                   const SvmHyper& hyper);

inline TrainedModel train(const CondensedSet& condensed, const FeatureMask& mask,
                          const SvmHyper& hyper) {
  return train(condensed.samples, mask, hyper);
}

/// Raw classifier output for one dissimilarity vector (full D values; only
/// masked dimensions are read).
double score_dissimilarity(const TrainedModel& model, std::span<const double> diss);

/// Verification score of a questioned signature against a reference set:
/// per-reference masked dissimilarity scores fused with Max.
double score(const TrainedModel& model, std::span<const double> questioned,
             const ReferenceSet& refs);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view json_text);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace dissim
