#include "dissim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dissim/errors.hpp"
#include "dissim/parallel.hpp"

namespace dissim {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::NoValidation:
      return "no_validation";
    case Strategy::LastIteration:
      return "last_iteration";
    case Strategy::GlobalValidation:
      return "global_validation";
  }
  return "unknown";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
  if (name == "no_validation") return Strategy::NoValidation;
  if (name == "last_iteration") return Strategy::LastIteration;
  if (name == "global_validation") return Strategy::GlobalValidation;
  return std::nullopt;
}

double transfer(double velocity_component) { return std::fabs(std::tanh(velocity_component)); }

double schedule_value(double start, double end, std::size_t t, std::size_t total) {
  if (total <= 1) return start;
  const double frac = static_cast<double>(t) / static_cast<double>(total - 1);
  return start + (end - start) * frac;
}

Archive::Archive(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("archive capacity must be >= 1");
}

bool Archive::order_before(const ArchiveEntry& a, const ArchiveEntry& b) {
  if (a.sel_fitness != b.sel_fitness) return a.sel_fitness < b.sel_fitness;
  if (a.mask.cardinality() != b.mask.cardinality()) {
    return a.mask.cardinality() < b.mask.cardinality();
  }
  return FeatureMask::compare_lex(a.mask, b.mask) < 0;
}

void Archive::merge(std::span<const ArchiveEntry> candidates) {
  for (const auto& candidate : candidates) {
    auto existing = std::find_if(entries_.begin(), entries_.end(), [&](const ArchiveEntry& e) {
      return e.mask == candidate.mask;
    });
    if (existing != entries_.end()) {
      // Same mask revalidated: keep the better record (identical in real
      // runs, where fitness is a pure function of the mask).
      if (candidate.sel_fitness < existing->sel_fitness) *existing = candidate;
      continue;
    }
    entries_.push_back(candidate);
  }
  std::sort(entries_.begin(), entries_.end(), order_before);
  if (entries_.size() > capacity_) entries_.resize(capacity_);
}

bool Archive::invariants_hold() const {
  if (entries_.size() > capacity_) return false;
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (order_before(entries_[i], entries_[i - 1])) return false;
    if (entries_[i].mask == entries_[i - 1].mask) return false;
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    for (std::size_t j = i + 1; j < entries_.size(); ++j) {
      if (entries_[i].mask == entries_[j].mask) return false;
    }
  }
  return true;
}

void update_particle(Particle& particle, const FeatureMask& global_best_mask,
                     std::size_t iteration, const SwarmConfig& config, Rng& rng) {
  const double w = schedule_value(config.w_start, config.w_end, iteration, config.max_iterations);
  const double c1 =
      schedule_value(config.c1_start, config.c1_end, iteration, config.max_iterations);
  const double c2 =
      schedule_value(config.c2_start, config.c2_end, iteration, config.max_iterations);

  const std::size_t dim = particle.mask.size();
  for (std::size_t d = 0; d < dim; ++d) {
    const double bit = particle.mask.test(d) ? 1.0 : 0.0;
    const double pbest = particle.best_mask.test(d) ? 1.0 : 0.0;
    const double gbest = global_best_mask.test(d) ? 1.0 : 0.0;
    const double r1 = rng.next_double();
    const double r2 = rng.next_double();
    double v = w * particle.velocity[d] + c1 * r1 * (pbest - bit) + c2 * r2 * (gbest - bit);
    v = std::clamp(v, -config.v_max, config.v_max);
    particle.velocity[d] = v;
    if (rng.next_double() < transfer(v)) particle.mask.flip(d);
  }
}

namespace {

void validate(const SwarmConfig& config) {
  if (config.swarm_size < 2) throw ConfigError("swarm_size must be >= 2");
  if (config.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (config.archive_capacity < 1) throw ConfigError("archive_capacity must be >= 1");
  if (!(config.v_max > 0.0)) throw ConfigError("v_max must be > 0");
}

struct GlobalBest {
  FeatureMask mask;
  double fitness = 0.0;
  std::size_t particle_id = 0;
};

// Scans personal bests in id order; strict improvement keeps the lowest id
// on ties, independent of evaluation scheduling.
void refresh_global_best(std::span<const Particle> swarm, GlobalBest& gbest) {
  for (const auto& p : swarm) {
    if (p.best_fitness < gbest.fitness) {
      gbest.mask = p.best_mask;
      gbest.fitness = p.best_fitness;
      gbest.particle_id = p.id;
    }
  }
}

double mean_cardinality(std::span<const Particle> swarm) {
  double sum = 0.0;
  for (const auto& p : swarm) sum += static_cast<double>(p.mask.cardinality());
  return sum / static_cast<double>(swarm.size());
}

}  // namespace

RunResult run(const SwarmConfig& config, FitnessContext& ctx, SwarmObserver* observer) {
  validate(config);
  const std::size_t dim = ctx.dim();
  const std::size_t n = config.swarm_size;

  std::vector<Particle> swarm(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(config.seed, {stream::kSwarmInit, i});
    Particle& p = swarm[i];
    p.id = i;
    p.mask = FeatureMask(dim);
    for (std::size_t d = 0; d < dim; ++d) p.mask.set(d, rng.next_bernoulli(0.5));
    p.velocity.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) p.velocity[d] = rng.next_uniform(-1.0, 1.0);
  }

  Archive archive(config.archive_capacity);
  GlobalBest gbest;
  gbest.fitness = std::numeric_limits<double>::infinity();

  RunResult result;
  result.history.reserve(config.max_iterations);

  std::vector<double> opt_fit(n);
  std::vector<double> sel_fit(n);

  for (std::size_t t = 0; t < config.max_iterations; ++t) {
    if (t > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        Rng rng(config.seed, {stream::kParticleUpdate, i, t});
        update_particle(swarm[i], gbest.mask, t, config, rng);
      }
    }

    parallel_for(n, ctx.workers(),
                 [&](std::size_t i) { opt_fit[i] = ctx.fitness(swarm[i].mask, EvalKind::Opt); });
    if (config.strategy == Strategy::GlobalValidation) {
      parallel_for(n, ctx.workers(),
                   [&](std::size_t i) { sel_fit[i] = ctx.fitness(swarm[i].mask, EvalKind::Sel); });
    }

    for (std::size_t i = 0; i < n; ++i) {
      Particle& p = swarm[i];
      if (t == 0 || opt_fit[i] < p.best_fitness) {
        p.best_fitness = opt_fit[i];
        p.best_mask = p.mask;
      }
    }
    refresh_global_best(swarm, gbest);

    IterationRecord record;
    record.iteration = t;
    record.best_opt = gbest.fitness;
    record.mean_cardinality = mean_cardinality(swarm);

    if (config.strategy == Strategy::GlobalValidation) {
      std::vector<ArchiveEntry> candidates;
      candidates.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        candidates.push_back({swarm[i].mask, opt_fit[i], sel_fit[i], t});
      }
      archive.merge(candidates);
      record.best_sel = archive.head().sel_fitness;
    }

    result.history.push_back(record);
    if (observer != nullptr) observer->on_iteration(t, swarm, gbest.mask, gbest.fitness);
  }

  result.best_opt_mask = gbest.mask;
  result.best_opt_fitness = gbest.fitness;

  switch (config.strategy) {
    case Strategy::NoValidation: {
      result.final_mask = gbest.mask;
      result.final_opt_fitness = gbest.fitness;
      break;
    }
    case Strategy::LastIteration: {
      // Validate the final candidate solutions (personal bests + global
      // best) on the selection set, once.
      std::vector<ArchiveEntry> candidates;
      candidates.reserve(n + 1);
      for (const auto& p : swarm) candidates.push_back({p.best_mask, p.best_fitness, 0.0, 0});
      candidates.push_back({gbest.mask, gbest.fitness, 0.0, 0});
      parallel_for(candidates.size(), ctx.workers(), [&](std::size_t i) {
        candidates[i].sel_fitness = ctx.fitness(candidates[i].mask, EvalKind::Sel);
      });
      const auto best = std::min_element(candidates.begin(), candidates.end(),
                                         Archive::order_before);
      result.final_mask = best->mask;
      result.final_opt_fitness = best->opt_fitness;
      result.final_sel_fitness = best->sel_fitness;
      result.history.back().best_sel = best->sel_fitness;
      break;
    }
    case Strategy::GlobalValidation: {
      const ArchiveEntry& head = archive.head();
      result.final_mask = head.mask;
      result.final_opt_fitness = head.opt_fitness;
      result.final_sel_fitness = head.sel_fitness;
      result.archive = archive.entries();
      break;
    }
  }
  return result;
}

}  // namespace dissim
