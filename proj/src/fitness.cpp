#include "dissim/fitness.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "dissim/dichotomy.hpp"
#include "dissim/errors.hpp"
#include "dissim/kernels.hpp"
#include "dissim/rng.hpp"

namespace dissim {

EvalSet::EvalSet(std::size_t dim, std::size_t ref_count, std::vector<Trial> trials,
                 std::vector<double> diss)
    : dim_(dim), ref_count_(ref_count), trials_(std::move(trials)), diss_(std::move(diss)) {
  if (ref_count_ == 0) throw ConfigError("EvalSet: ref_count must be >= 1");
  if (diss_.size() != trials_.size() * ref_count_ * dim_) {
    throw DimensionError("EvalSet: dissimilarity buffer size mismatch");
  }
}

std::vector<std::int64_t> EvalSet::writer_ids() const {
  std::set<std::int64_t> ids;
  for (const auto& t : trials_) ids.insert(t.writer_id);
  return {ids.begin(), ids.end()};
}

EvalSet build_eval_set(const Dataset& dataset, const std::vector<std::int64_t>& writers,
                       std::size_t n_references, std::size_t n_genuine, std::size_t n_skilled,
                       std::uint64_t seed) {
  if (writers.empty()) throw DataError("build_eval_set: empty writer set");
  if (n_references == 0) throw ConfigError("build_eval_set: n_references must be >= 1");

  std::vector<std::int64_t> ordered = writers;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  const std::size_t dim = dataset.dim();
  std::vector<EvalSet::Trial> trials;
  std::vector<double> diss;
  trials.reserve(ordered.size() * (n_genuine + n_skilled));
  diss.reserve(trials.capacity() * n_references * dim);

  const auto& records = dataset.records();
  for (const std::int64_t writer : ordered) {
    const std::uint64_t wtag = static_cast<std::uint64_t>(writer);
    const auto [refs, questioned_genuine] =
        pick_genuine_roles(dataset, writer, n_references, n_genuine,
                           Rng(seed, {stream::kEvalBuild, wtag}).next_u64());

    const auto& skilled_pool = dataset.indices_of(writer, Label::SkilledForgery);
    if (skilled_pool.size() < n_skilled) {
      throw DataError("writer " + std::to_string(writer) + " has " +
                      std::to_string(skilled_pool.size()) + " SkilledForgery samples, need " +
                      std::to_string(n_skilled));
    }
    std::vector<std::size_t> skilled_order = skilled_pool;
    Rng rng(seed, {stream::kEvalBuild, wtag, 1});
    rng.shuffle(skilled_order);

    auto add_trial = [&](std::size_t questioned_idx, Truth truth) {
      trials.push_back({writer, truth});
      const auto& q = records[questioned_idx].features;
      for (const std::size_t r : refs) {
        const std::size_t offset = diss.size();
        diss.resize(offset + dim);
        kern::abs_diff(q.data(), records[r].features.data(), diss.data() + offset, dim);
      }
    };
    for (std::size_t i = 0; i < n_genuine; ++i) add_trial(questioned_genuine[i], Truth::Genuine);
    for (std::size_t i = 0; i < n_skilled; ++i) add_trial(skilled_order[i], Truth::Skilled);
  }

  return EvalSet(dim, n_references, std::move(trials), std::move(diss));
}

std::vector<ScoredTrial> score_eval_set(const EvalSet& eval, const TrainedModel& model) {
  if (eval.dim() != model.mask.size()) {
    throw DimensionError("score_eval_set: eval dim " + std::to_string(eval.dim()) +
                         " does not match mask size " + std::to_string(model.mask.size()));
  }
  const auto idx = model.mask.selected_indices();
  std::vector<ScoredTrial> out;
  out.reserve(eval.trials().size());
  for (std::size_t t = 0; t < eval.trials().size(); ++t) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < eval.ref_count(); ++r) {
      const double partial =
          kern::dot_indexed(model.weights.data(), eval.diss_row(t, r), idx.data(), idx.size()) +
          model.bias;
      best = std::max(best, partial);
    }
    const auto& trial = eval.trials()[t];
    out.push_back({trial.writer_id, trial.truth, best});
  }
  return out;
}

std::size_t FitnessContext::MaskKeyHash::operator()(const std::vector<std::uint64_t>& words) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const std::uint64_t w : words) {
    h ^= static_cast<std::size_t>(w);
    h *= 0x100000001b3ULL;
  }
  return h;
}

FitnessContext::FitnessContext(CondensedSet condensed, EvalSet opt, EvalSet sel, SvmHyper hyper,
                               unsigned workers)
    : condensed_(std::move(condensed)),
      opt_(std::move(opt)),
      sel_(std::move(sel)),
      hyper_(hyper),
      workers_(workers) {
  if (condensed_.samples.empty()) throw DataError("FitnessContext: empty condensed set");
  dim_ = condensed_.samples.front().values.size();
  if (opt_.dim() != dim_ || sel_.dim() != dim_) {
    throw DimensionError("FitnessContext: eval sets and training set disagree on dimension");
  }
  const auto opt_writers = opt_.writer_ids();
  const auto sel_writers = sel_.writer_ids();
  std::vector<std::int64_t> overlap;
  std::set_intersection(opt_writers.begin(), opt_writers.end(), sel_writers.begin(),
                        sel_writers.end(), std::back_inserter(overlap));
  if (!overlap.empty()) {
    throw ConfigError("FitnessContext: Opt and Sel writer sets overlap (writer " +
                      std::to_string(overlap.front()) + ")");
  }
}

double FitnessContext::fitness_uncached(const FeatureMask& mask, EvalKind kind) const {
  if (mask.cardinality() == 0) return 1.0;  // declared penalty, no training
  const TrainedModel model = train(condensed_.samples, mask, hyper_);
  const auto trials = score_eval_set(kind == EvalKind::Opt ? opt_ : sel_, model);
  return eer_user(trials).eer;
}

std::shared_ptr<const TrainedModel> FitnessContext::model_for(const FeatureMask& mask) {
  if (mask.cardinality() == 0) throw DegenerateMaskError("model_for: all-zero feature mask");
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(mask.words());
    if (it != cache_.end() && it->second.model) return it->second.model;
  }
  auto model = std::make_shared<const TrainedModel>(train(condensed_.samples, mask, hyper_));
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    auto& entry = cache_[mask.words()];
    if (!entry.model) entry.model = std::move(model);
    return entry.model;
  }
}

double FitnessContext::fitness(const FeatureMask& mask, EvalKind kind) {
  if (mask.cardinality() == 0) return 1.0;
  const std::size_t slot = kind == EvalKind::Opt ? 0 : 1;
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(mask.words());
    if (it != cache_.end() && it->second.fitness[slot]) return *it->second.fitness[slot];
  }
  const auto model = model_for(mask);
  const auto trials = score_eval_set(kind == EvalKind::Opt ? opt_ : sel_, *model);
  const double value = eer_user(trials).eer;
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    auto& entry = cache_[mask.words()];
    if (!entry.model) entry.model = model;
    if (!entry.fitness[slot]) entry.fitness[slot] = value;
    return *entry.fitness[slot];
  }
}

std::size_t FitnessContext::cache_size() const {
  const std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

}  // namespace dissim
