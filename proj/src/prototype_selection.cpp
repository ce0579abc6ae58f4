#include "dissim/prototype_selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "dissim/errors.hpp"
#include "dissim/kernels.hpp"
#include "dissim/rng.hpp"

namespace dissim {

namespace {

// Label of the store sample nearest to `probe`; ties on distance go to the
// lowest source index, which makes the answer independent of store order.
PairLabel classify_1nn(const std::vector<DissimilaritySample>& samples,
                       const std::vector<std::size_t>& store, std::size_t probe) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = std::numeric_limits<std::size_t>::max();
  const auto& p = samples[probe].values;
  for (const std::size_t s : store) {
    const double d = kern::squared_distance(p.data(), samples[s].values.data(), p.size());
    if (d < best || (d == best && s < best_idx)) {
      best = d;
      best_idx = s;
    }
  }
  return samples[best_idx].label;
}

}  // namespace

CondensedSet condense(const std::vector<DissimilaritySample>& samples, std::uint64_t seed) {
  if (samples.empty()) throw DataError("condense: empty input");
  const bool has_pos = std::any_of(samples.begin(), samples.end(),
                                   [](const auto& s) { return s.label == PairLabel::Positive; });
  const bool has_neg = std::any_of(samples.begin(), samples.end(),
                                   [](const auto& s) { return s.label == PairLabel::Negative; });
  if (!has_pos || !has_neg) throw DataError("condense: input must contain both labels");

  std::vector<std::size_t> scan_order(samples.size());
  std::iota(scan_order.begin(), scan_order.end(), 0);
  Rng rng(seed, {stream::kCondense});
  rng.shuffle(scan_order);

  std::vector<std::size_t> store;
  std::vector<bool> in_store(samples.size(), false);
  for (const PairLabel label : {PairLabel::Positive, PairLabel::Negative}) {
    for (const std::size_t i : scan_order) {
      if (samples[i].label == label) {
        store.push_back(i);
        in_store[i] = true;
        break;
      }
    }
  }

  bool added = true;
  while (added) {
    added = false;
    for (const std::size_t i : scan_order) {
      if (in_store[i]) continue;
      if (classify_1nn(samples, store, i) != samples[i].label) {
        store.push_back(i);
        in_store[i] = true;
        added = true;
      }
    }
  }

  CondensedSet out;
  out.kept_indices = store;
  std::sort(out.kept_indices.begin(), out.kept_indices.end());
  out.samples.reserve(out.kept_indices.size());
  for (const std::size_t i : out.kept_indices) out.samples.push_back(samples[i]);
  return out;
}

}  // namespace dissim
