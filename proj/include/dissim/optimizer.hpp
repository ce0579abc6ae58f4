#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dissim/fitness.hpp"
#include "dissim/rng.hpp"

// Adaptive binary PSO with a V-shaped transfer function, wrapper EER fitness,
// and three overfitting-control strategies. The swarm always moves on
// Opt-fitness; the strategies differ only in how the reported solution is
// validated against the Sel writers:
//   NoValidation     - global best by Opt-fitness.
//   LastIteration    - personal bests plus the global best are scored on Sel
//                      once, at termination; the best by Sel-fitness wins.
//   GlobalValidation - every particle's mask is scored on Sel every
//                      iteration; an external archive keeps the N best
//                      validated solutions and its head is the final answer.

namespace dissim {

enum class Strategy { NoValidation = 0, LastIteration = 1, GlobalValidation = 2 };

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(std::string_view name);

struct SwarmConfig {
  std::size_t swarm_size = 20;
  std::size_t max_iterations = 40;
  double w_start = 0.9, w_end = 0.4;    // inertia schedule
  double c1_start = 2.5, c1_end = 0.5;  // cognitive schedule
  double c2_start = 0.5, c2_end = 2.5;  // social schedule
  double v_max = 4.0;
  std::size_t archive_capacity = 20;
  Strategy strategy = Strategy::GlobalValidation;
  std::uint64_t seed = 1;
};

struct Particle {
  std::vector<double> velocity;  // clamped to [-v_max, v_max]
  FeatureMask mask;              // current binary position
  FeatureMask best_mask;         // personal best by Opt-fitness
  double best_fitness = 0.0;
  std::size_t id = 0;
};

struct ArchiveEntry {
  FeatureMask mask;
  double opt_fitness = 0.0;
  double sel_fitness = 0.0;
  std::size_t iteration_found = 0;
};

// Bounded archive of validated solutions, kept sorted ascending by
// (sel_fitness, mask cardinality, lexicographic bits) with unique masks.
class Archive {
 public:
  explicit Archive(std::size_t capacity);

  void merge(std::span<const ArchiveEntry> candidates);

  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  const ArchiveEntry& head() const { return entries_.front(); }

  static bool order_before(const ArchiveEntry& a, const ArchiveEntry& b);

  // Sortedness, uniqueness and capacity; used by tests and debug checks.
  bool invariants_hold() const;

 private:
  std::size_t capacity_;
  std::vector<ArchiveEntry> entries_;
};

struct IterationRecord {
  std::size_t iteration = 0;
  double best_opt = 0.0;                // global best Opt-fitness so far
  std::optional<double> best_sel;       // best validated Sel-fitness, when computed
  double mean_cardinality = 0.0;        // mean mask cardinality of the current swarm
};

struct RunResult {
  FeatureMask final_mask;
  double final_opt_fitness = 0.0;
  std::optional<double> final_sel_fitness;
  FeatureMask best_opt_mask;   // global best by Opt-fitness, regardless of strategy
  double best_opt_fitness = 0.0;
  std::vector<IterationRecord> history;
  std::vector<ArchiveEntry> archive;  // empty unless GlobalValidation
};

// Test/instrumentation hook invoked after each iteration's bookkeeping.
class SwarmObserver {
 public:
  virtual ~SwarmObserver() = default;
  virtual void on_iteration(std::size_t iteration, std::span<const Particle> swarm,
                            const FeatureMask& global_best_mask, double global_best_fitness) = 0;
};

/// V-shaped transfer function |tanh(v)|: the probability that a velocity
/// component complements its bit.
double transfer(double velocity_component);

/// Linear schedule value at iteration t of total T (reaches `end` at t = T-1).
double schedule_value(double start, double end, std::size_t t, std::size_t total);

/// One velocity + bit update against the global best. Consumes, per
/// dimension, r1 and r2 for the velocity and one uniform draw for the
/// V-shaped flip rule.
void update_particle(Particle& particle, const FeatureMask& global_best_mask,
                     std::size_t iteration, const SwarmConfig& config, Rng& rng);

/// Full optimization run. Iteration 0 evaluates the seeded initial swarm;
/// each later iteration updates every particle and re-evaluates. Fitness
/// evaluations within an iteration run concurrently (ctx.workers()); results
/// are identical for any worker count.
RunResult run(const SwarmConfig& config, FitnessContext& ctx, SwarmObserver* observer = nullptr);

}  // namespace dissim
