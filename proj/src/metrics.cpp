#include "dissim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dissim/errors.hpp"

namespace dissim {

namespace {

void check_classes(std::span<const ScoredTrial> trials) {
  std::size_t genuine = 0;
  std::size_t skilled = 0;
  for (const auto& t : trials) {
    if (!std::isfinite(t.fused_score)) throw MetricError("non-finite trial score");
    (t.truth == Truth::Genuine ? genuine : skilled) += 1;
  }
  if (genuine == 0 || skilled == 0) {
    throw MetricError("EER needs at least one trial of each class (" + std::to_string(genuine) +
                      " genuine, " + std::to_string(skilled) + " skilled)");
  }
}

}  // namespace

std::vector<RatePoint> far_frr_curve(std::span<const ScoredTrial> trials) {
  check_classes(trials);

  std::vector<std::pair<double, Truth>> sorted;
  sorted.reserve(trials.size());
  double g_total = 0.0;
  double s_total = 0.0;
  for (const auto& t : trials) {
    sorted.emplace_back(t.fused_score, t.truth);
    (t.truth == Truth::Genuine ? g_total : s_total) += 1.0;
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<RatePoint> curve;
  double genuine_below = 0.0;
  double skilled_below = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double t = sorted[i].first;
    curve.push_back({t, (s_total - skilled_below) / s_total, genuine_below / g_total});
    while (i < sorted.size() && sorted[i].first == t) {
      (sorted[i].second == Truth::Genuine ? genuine_below : skilled_below) += 1.0;
      ++i;
    }
  }
  // Reject-all sentinel just above the maximum score.
  const double top = sorted.back().first;
  const double sentinel = std::nextafter(top, std::numeric_limits<double>::infinity());
  curve.push_back({sentinel, 0.0, 1.0});
  return curve;
}

EerResult eer_global(std::span<const ScoredTrial> trials) {
  const auto curve = far_frr_curve(trials);

  // FRR - FAR starts at -FAR(min score) < 0 and ends at +1; find the first
  // sweep point at or past the crossing.
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double diff = curve[k].frr - curve[k].far;
    if (diff == 0.0) return {curve[k].frr, curve[k].threshold};
    if (diff > 0.0) {
      const auto& lo = curve[k - 1];
      const auto& hi = curve[k];
      const double d_frr = hi.frr - lo.frr;
      const double d_far = hi.far - lo.far;
      const double s = (lo.far - lo.frr) / (d_frr - d_far);
      return {lo.frr + s * d_frr, lo.threshold + s * (hi.threshold - lo.threshold)};
    }
  }
  // Unreachable: the sentinel point always has FRR - FAR = 1.
  throw MetricError("FAR/FRR curves never crossed");
}

UserEerResult eer_user(std::span<const ScoredTrial> trials) {
  std::map<std::int64_t, std::vector<ScoredTrial>> by_writer;
  for (const auto& t : trials) by_writer[t.writer_id].push_back(t);
  if (by_writer.empty()) throw MetricError("EER needs at least one trial");

  UserEerResult out;
  for (const auto& [writer, writer_trials] : by_writer) {
    try {
      out.per_writer[writer] = eer_global(writer_trials);
    } catch (const MetricError& e) {
      throw MetricError("writer " + std::to_string(writer) + ": " + e.what());
    }
  }
  double sum = 0.0;
  for (const auto& [_, result] : out.per_writer) sum += result.eer;
  out.eer = sum / static_cast<double>(out.per_writer.size());
  return out;
}

}  // namespace dissim
