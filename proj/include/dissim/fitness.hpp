#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dissim/classifier.hpp"
#include "dissim/data_model.hpp"
#include "dissim/metrics.hpp"

namespace dissim {

enum class EvalKind { Opt = 0, Sel = 1 };

// Precomputed evaluation pack for one writer set: every questioned signature
// (n_genuine genuine + n_skilled skilled per writer) paired against that
// writer's references, with the full-D dissimilarity vectors materialized
// once. Scoring a mask is then a masked dot product per row.
class EvalSet {
 public:
  struct Trial {
    std::int64_t writer_id;
    Truth truth;
  };

  EvalSet(std::size_t dim, std::size_t ref_count, std::vector<Trial> trials,
          std::vector<double> diss);

  std::size_t dim() const { return dim_; }
  std::size_t ref_count() const { return ref_count_; }
  const std::vector<Trial>& trials() const { return trials_; }

  // Row r of trial t (one reference comparison), length dim().
  const double* diss_row(std::size_t trial, std::size_t ref) const {
    return diss_.data() + (trial * ref_count_ + ref) * dim_;
  }

  std::vector<std::int64_t> writer_ids() const;

 private:
  std::size_t dim_;
  std::size_t ref_count_;
  std::vector<Trial> trials_;
  std::vector<double> diss_;  // trials x ref_count rows, row-major
};

/// Builds the evaluation pack for `writers`: per writer, n_references
/// references and n_genuine questioned genuines are drawn disjointly from the
/// writer's genuine samples, plus n_skilled questioned skilled forgeries.
EvalSet build_eval_set(const Dataset& dataset, const std::vector<std::int64_t>& writers,
                       std::size_t n_references, std::size_t n_genuine, std::size_t n_skilled,
                       std::uint64_t seed);

/// Fused (Max over references) scores of every trial under the model.
std::vector<ScoredTrial> score_eval_set(const EvalSet& eval, const TrainedModel& model);

// Wrapper-fitness provider: trains the masked classifier on the condensed
// training set and returns the user-threshold EER over the chosen evaluation
// set. Models and fitness values are cached per mask; entries are immutable
// once computed, so concurrent evaluation cannot change any value, only who
// computes it first. The all-zero mask short-circuits to the penalty fitness
// 1.0 without training.
class FitnessContext {
 public:
  FitnessContext(CondensedSet condensed, EvalSet opt, EvalSet sel, SvmHyper hyper,
                 unsigned workers = 0);

  std::size_t dim() const { return dim_; }
  unsigned workers() const { return workers_; }
  const CondensedSet& condensed() const { return condensed_; }
  const EvalSet& eval_set(EvalKind kind) const { return kind == EvalKind::Opt ? opt_ : sel_; }
  const SvmHyper& hyper() const { return hyper_; }

  double fitness(const FeatureMask& mask, EvalKind kind);

  /// Same value as fitness() but bypassing the cache (test hook).
  double fitness_uncached(const FeatureMask& mask, EvalKind kind) const;

  /// Trained model for a mask (cached). Throws DegenerateMaskError on an
  /// all-zero mask.
  std::shared_ptr<const TrainedModel> model_for(const FeatureMask& mask);

  std::size_t cache_size() const;

 private:
  struct CacheEntry {
    std::shared_ptr<const TrainedModel> model;
    std::array<std::optional<double>, 2> fitness;
  };

  struct MaskKeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& words) const;
  };

  CondensedSet condensed_;
  EvalSet opt_;
  EvalSet sel_;
  SvmHyper hyper_;
  unsigned workers_;
  std::size_t dim_;

  mutable std::mutex mutex_;
  std::unordered_map<std::vector<std::uint64_t>, CacheEntry, MaskKeyHash> cache_;
};

}  // namespace dissim
