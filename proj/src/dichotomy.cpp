#include "dissim/dichotomy.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "dissim/errors.hpp"
#include "dissim/kernels.hpp"
#include "dissim/rng.hpp"

namespace dissim {

ReferenceSet make_reference_set(std::int64_t writer, std::vector<SignatureRecord> references) {
  if (references.empty()) throw DataError("reference set for writer " + std::to_string(writer) + " is empty");
  for (const auto& rec : references) {
    if (rec.writer_id != writer || rec.label != Label::Genuine) {
      throw DataError("reference set for writer " + std::to_string(writer) +
                      " must contain only genuine signatures of that writer");
    }
  }
  return ReferenceSet{writer, std::move(references)};
}

std::vector<double> dissimilarity(std::span<const double> questioned,
                                  std::span<const double> reference) {
  if (questioned.size() != reference.size()) {
    throw DimensionError("dissimilarity: length mismatch (" + std::to_string(questioned.size()) +
                         " vs " + std::to_string(reference.size()) + ")");
  }
  std::vector<double> out(questioned.size());
  kern::abs_diff(questioned.data(), reference.data(), out.data(), out.size());
  return out;
}

double fuse_scores(std::span<const double> partial_scores) {
  if (partial_scores.empty()) throw UsageError("fuse_scores: empty score list");
  return *std::max_element(partial_scores.begin(), partial_scores.end());
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> pick_genuine_roles(
    const Dataset& dataset, std::int64_t writer, std::size_t n_references,
    std::size_t n_questioned, std::uint64_t seed) {
  const auto& genuine = dataset.indices_of(writer, Label::Genuine);
  if (genuine.size() < n_references + n_questioned) {
    throw DataError("writer " + std::to_string(writer) + " has " +
                    std::to_string(genuine.size()) + " Genuine samples, need " +
                    std::to_string(n_references + n_questioned) +
                    " (references + questioned)");
  }
  std::vector<std::size_t> order = genuine;
  Rng rng(seed, {stream::kSelectSamples, static_cast<std::uint64_t>(writer)});
  rng.shuffle(order);
  std::vector<std::size_t> refs(order.begin(), order.begin() + n_references);
  std::vector<std::size_t> questioned(order.begin() + n_references,
                                      order.begin() + n_references + n_questioned);
  return {std::move(refs), std::move(questioned)};
}

std::vector<DissimilaritySample> build_training_set(const Dataset& dataset,
                                                    const std::vector<std::int64_t>& writers,
                                                    std::size_t n_references,
                                                    std::size_t n_genuine,
                                                    std::size_t n_random_forgery,
                                                    std::uint64_t seed) {
  if (writers.empty()) throw DataError("build_training_set: empty writer set");
  if (n_references == 0) throw ConfigError("build_training_set: n_references must be >= 1");
  if (n_random_forgery > 0 && writers.size() < 2) {
    throw DataError("build_training_set: random forgeries need at least two writers");
  }

  std::vector<std::int64_t> ordered = writers;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<DissimilaritySample> samples;
  samples.reserve(ordered.size() * n_references * (n_genuine + n_random_forgery));

  const auto& records = dataset.records();
  for (const std::int64_t writer : ordered) {
    const std::uint64_t wtag = static_cast<std::uint64_t>(writer);
    const auto [refs, questioned] =
        pick_genuine_roles(dataset, writer, n_references, n_genuine,
                           Rng(seed, {stream::kTrainingPairs, wtag}).next_u64());

    for (const std::size_t q : questioned) {
      for (const std::size_t r : refs) {
        samples.push_back({dissimilarity(records[q].features, records[r].features),
                           PairLabel::Positive, writer, PairKind::GenuineVsRef});
      }
    }

    // Random forgeries: forging writer uniform among the other training
    // writers, then one of their genuine signatures uniform; distinct
    // (writer, sample) draws.
    if (n_random_forgery > 0) {
      std::size_t candidates = 0;
      for (const std::int64_t other : ordered) {
        if (other != writer) candidates += dataset.indices_of(other, Label::Genuine).size();
      }
      if (candidates < n_random_forgery) {
        throw DataError("writer " + std::to_string(writer) + ": only " +
                        std::to_string(candidates) + " random-forgery candidates, need " +
                        std::to_string(n_random_forgery));
      }
      Rng rng(seed, {stream::kTrainingPairs, wtag, 1});
      std::set<std::pair<std::int64_t, std::size_t>> chosen;
      while (chosen.size() < n_random_forgery) {
        std::int64_t other = ordered[rng.next_below(ordered.size())];
        if (other == writer) continue;
        const auto& pool = dataset.indices_of(other, Label::Genuine);
        if (pool.empty()) continue;
        const std::size_t pick = pool[rng.next_below(pool.size())];
        if (!chosen.insert({other, pick}).second) continue;
        for (const std::size_t r : refs) {
          samples.push_back({dissimilarity(records[pick].features, records[r].features),
                             PairLabel::Negative, writer, PairKind::RandomVsRef});
        }
      }
    }
  }
  return samples;
}

}  // namespace dissim
