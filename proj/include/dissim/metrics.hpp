#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

// FAR/FRR curves and Equal Error Rate. Thresholds accept a trial when
// fused_score >= t; FRR(t) is the fraction of Genuine trials below t and
// FAR(t) the fraction of Skilled trials at or above t.

namespace dissim {

enum class Truth : std::uint8_t { Genuine = 0, Skilled = 1 };

struct ScoredTrial {
  std::int64_t writer_id = 0;
  Truth truth = Truth::Genuine;
  double fused_score = 0.0;
};

struct EerResult {
  double eer = 0.0;        // in [0, 1]
  double threshold = 0.0;  // operating threshold at the crossing
};

struct UserEerResult {
  double eer = 0.0;                         // unweighted mean of per-writer EERs
  std::map<std::int64_t, EerResult> per_writer;
};

// One point of the FAR/FRR sweep, exposed so callers can dump raw curves.
struct RatePoint {
  double threshold;
  double far;
  double frr;
};

/// All achievable operating points, ascending threshold, from accept-all to
/// the trailing reject-all sentinel.
std::vector<RatePoint> far_frr_curve(std::span<const ScoredTrial> trials);

/// Global-threshold EER: sweeps all distinct scores, interpolating linearly
/// between the two bracketing sweep points when FAR and FRR cross between
/// them. Raises MetricError unless both classes are present (finite scores).
EerResult eer_global(std::span<const ScoredTrial> trials);

/// User-threshold EER: eer_global per writer over that writer's trials only,
/// averaged unweighted. Raises MetricError naming any writer that lacks a
/// class.
UserEerResult eer_user(std::span<const ScoredTrial> trials);

}  // namespace dissim
