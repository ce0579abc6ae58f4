#include "dissim/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dissim/errors.hpp"
#include "dissim/kernels.hpp"
#include "dissim/rng.hpp"
#include "dissim/text.hpp"

namespace dissim {

FeatureMask::FeatureMask(std::size_t size, bool all_ones)
    : words_((size + 63) / 64, 0), size_(size) {
  if (all_ones && size > 0) {
    for (auto& w : words_) w = ~0ULL;
    const std::size_t tail = size % 64;
    if (tail != 0) words_.back() &= (1ULL << tail) - 1;
    cardinality_ = size;
  }
}

FeatureMask FeatureMask::from_bits(const std::vector<bool>& bits) {
  FeatureMask mask(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) mask.set(i, true);
  }
  return mask;
}

FeatureMask FeatureMask::from_hex(std::string_view hex, std::size_t size) {
  const std::size_t n_bytes = (size + 7) / 8;
  if (hex.size() != 2 * n_bytes) {
    throw ParseError("mask hex has " + std::to_string(hex.size()) + " digits, expected " +
                     std::to_string(2 * n_bytes) + " for " + std::to_string(size) + " bits");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  FeatureMask mask(size);
  for (std::size_t byte = 0; byte < n_bytes; ++byte) {
    const int hi = nibble(hex[2 * byte]);
    const int lo = nibble(hex[2 * byte + 1]);
    if (hi < 0 || lo < 0) throw ParseError("mask hex contains a non-hex digit");
    const std::uint8_t value = static_cast<std::uint8_t>(hi * 16 + lo);
    for (int bit = 0; bit < 8; ++bit) {
      if ((value >> bit) & 1) {
        const std::size_t i = byte * 8 + static_cast<std::size_t>(bit);
        if (i >= size) throw ParseError("mask hex sets a bit beyond " + std::to_string(size));
        mask.set(i, true);
      }
    }
  }
  return mask;
}

std::string FeatureMask::to_hex() const {
  static const char* digits = "0123456789abcdef";
  const std::size_t n_bytes = (size_ + 7) / 8;
  std::string out(2 * n_bytes, '0');
  for (std::size_t byte = 0; byte < n_bytes; ++byte) {
    const std::uint8_t value =
        static_cast<std::uint8_t>((words_[byte / 8] >> ((byte % 8) * 8)) & 0xff);
    out[2 * byte] = digits[value >> 4];
    out[2 * byte + 1] = digits[value & 0xf];
  }
  return out;
}

bool FeatureMask::test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

void FeatureMask::set(std::size_t i, bool value) {
  const std::uint64_t bit = 1ULL << (i % 64);
  std::uint64_t& word = words_[i / 64];
  if (value && !(word & bit)) {
    word |= bit;
    ++cardinality_;
  } else if (!value && (word & bit)) {
    word &= ~bit;
    --cardinality_;
  }
}

void FeatureMask::flip(std::size_t i) { set(i, !test(i)); }

std::vector<std::int32_t> FeatureMask::selected_indices() const {
  std::vector<std::int32_t> out;
  out.reserve(cardinality_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      const int bit = std::countr_zero(word);
      out.push_back(static_cast<std::int32_t>(w * 64 + static_cast<std::size_t>(bit)));
      word &= word - 1;
    }
  }
  return out;
}

int FeatureMask::compare_lex(const FeatureMask& a, const FeatureMask& b) {
  const std::size_t n = std::min(a.words_.size(), b.words_.size());
  for (std::size_t w = 0; w < n; ++w) {
    const std::uint64_t diff = a.words_[w] ^ b.words_[w];
    if (diff != 0) {
      const int bit = std::countr_zero(diff);
      return ((a.words_[w] >> bit) & 1) ? 1 : -1;  // first differing bit: 0 sorts before 1
    }
  }
  if (a.size_ != b.size_) return a.size_ < b.size_ ? -1 : 1;
  return 0;
}

namespace {

struct GatheredProblem {
  std::vector<double> x;  // n rows of m masked features, row-major
  std::vector<double> y;  // +1 Positive / -1 Negative
  std::size_t n = 0;
  std::size_t m = 0;
};

GatheredProblem gather(std::span<const DissimilaritySample> samples,
                       const std::vector<std::int32_t>& idx) {
  GatheredProblem p;
  p.n = samples.size();
  p.m = idx.size();
  p.x.resize(p.n * p.m);
  p.y.resize(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    const auto& values = samples[i].values;
    double* row = p.x.data() + i * p.m;
    for (std::size_t j = 0; j < p.m; ++j) row[j] = values[static_cast<std::size_t>(idx[j])];
    p.y[i] = samples[i].label == PairLabel::Positive ? 1.0 : -1.0;
  }
  return p;
}

}  // namespace

TrainedModel train(std::span<const DissimilaritySample> samples, const FeatureMask& mask,
                   const SvmHyper& hyper) {
  if (mask.cardinality() == 0) throw DegenerateMaskError("train: all-zero feature mask");
  if (samples.empty()) throw DataError("train: empty training set");
  for (const auto& s : samples) {
    if (s.values.size() != mask.size()) {
      throw DimensionError("train: sample dimension " + std::to_string(s.values.size()) +
                           " does not match mask size " + std::to_string(mask.size()));
    }
  }
  const bool has_pos = std::any_of(samples.begin(), samples.end(),
                                   [](const auto& s) { return s.label == PairLabel::Positive; });
  const bool has_neg = std::any_of(samples.begin(), samples.end(),
                                   [](const auto& s) { return s.label == PairLabel::Negative; });
  if (!has_pos || !has_neg) throw DataError("train: training set must contain both labels");
  if (!(hyper.c > 0.0)) throw ConfigError("train: regularization c must be > 0");

  const auto idx = mask.selected_indices();
  const GatheredProblem p = gather(samples, idx);

  // Dual coordinate descent for the L1-hinge SVM (Hsieh et al. style), with
  // the bias handled as an implicit always-1 feature. Per-sample cost c/n
  // makes the primal loss an average, so duplicated samples do not move the
  // optimum.
  const double upper = hyper.c / static_cast<double>(p.n);
  std::vector<double> q_diag(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    const double* row = p.x.data() + i * p.m;
    q_diag[i] = kern::dot(row, row, p.m) + 1.0;
  }

  std::vector<double> alpha(p.n, 0.0);
  std::vector<double> w(p.m, 0.0);
  double bias = 0.0;

  std::vector<std::size_t> order(p.n);
  std::iota(order.begin(), order.end(), 0);

  std::size_t epoch = 0;
  for (; epoch < hyper.max_epochs; ++epoch) {
    Rng rng(hyper.seed, {stream::kSvmEpoch, epoch});
    rng.shuffle(order);
    double worst_violation = 0.0;
    for (const std::size_t i : order) {
      const double* row = p.x.data() + i * p.m;
      const double margin = p.y[i] * (kern::dot(w.data(), row, p.m) + bias);
      const double grad = margin - 1.0;
      double projected = grad;
      if (alpha[i] <= 0.0) {
        projected = std::min(grad, 0.0);
      } else if (alpha[i] >= upper) {
        projected = std::max(grad, 0.0);
      }
      worst_violation = std::max(worst_violation, std::fabs(projected));
      if (projected != 0.0) {
        const double next = std::clamp(alpha[i] - grad / q_diag[i], 0.0, upper);
        const double delta = next - alpha[i];
        if (delta != 0.0) {
          alpha[i] = next;
          kern::axpy(delta * p.y[i], row, w.data(), p.m);
          bias += delta * p.y[i];
        }
      }
    }
    if (worst_violation < hyper.tol) {
      ++epoch;
      break;
    }
  }

  double hinge = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    const double margin = p.y[i] * (kern::dot(w.data(), p.x.data() + i * p.m, p.m) + bias);
    hinge += std::max(0.0, 1.0 - margin);
  }
  const double objective = 0.5 * (kern::dot(w.data(), w.data(), p.m) + bias * bias) +
                           hyper.c * hinge / static_cast<double>(p.n);

  TrainedModel model;
  model.weights = std::move(w);
  model.bias = bias;
  model.mask = mask;
  model.hyper = hyper;
  model.objective = objective;
  model.epochs_run = epoch;
  return model;
}

double score_dissimilarity(const TrainedModel& model, std::span<const double> diss) {
  if (diss.size() != model.mask.size()) {
    throw DimensionError("score: dissimilarity dimension " + std::to_string(diss.size()) +
                         " does not match mask size " + std::to_string(model.mask.size()));
  }
  const auto idx = model.mask.selected_indices();
  return kern::dot_indexed(model.weights.data(), diss.data(), idx.data(), idx.size()) + model.bias;
}

double score(const TrainedModel& model, std::span<const double> questioned,
             const ReferenceSet& refs) {
  if (questioned.size() != model.mask.size()) {
    throw DimensionError("score: questioned dimension " + std::to_string(questioned.size()) +
                         " does not match mask size " + std::to_string(model.mask.size()));
  }
  if (refs.references.empty()) throw DataError("score: empty reference set");
  const auto idx = model.mask.selected_indices();
  std::vector<double> partial;
  partial.reserve(refs.references.size());
  for (const auto& ref : refs.references) {
    if (ref.features.size() != questioned.size()) {
      throw DimensionError("score: reference dimension mismatch");
    }
    partial.push_back(kern::abs_diff_dot_indexed(model.weights.data(), questioned.data(),
                                                 ref.features.data(), idx.data(), idx.size()) +
                      model.bias);
  }
  return fuse_scores(partial);
}

std::string model_to_json(const TrainedModel& model) {
  nlohmann::ordered_json j;
  j["dim"] = model.mask.size();
  j["mask_hex"] = model.mask.to_hex();
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["hyper"] = {{"c", model.hyper.c},
                {"max_epochs", model.hyper.max_epochs},
                {"tol", model.hyper.tol},
                {"seed", model.hyper.seed},
                {"kernel", "linear"}};
  j["objective"] = model.objective;
  j["epochs_run"] = model.epochs_run;
  return j.dump(2) + "\n";
}

TrainedModel model_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
    TrainedModel model;
    const std::size_t dim = j.at("dim").get<std::size_t>();
    model.mask = FeatureMask::from_hex(j.at("mask_hex").get<std::string>(), dim);
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    const auto& h = j.at("hyper");
    model.hyper.c = h.at("c").get<double>();
    model.hyper.max_epochs = h.at("max_epochs").get<std::size_t>();
    model.hyper.tol = h.at("tol").get<double>();
    model.hyper.seed = h.at("seed").get<std::uint64_t>();
    if (h.value("kernel", "linear") != std::string("linear")) {
      throw ParseError("model json: only the linear kernel is supported");
    }
    model.objective = j.at("objective").get<double>();
    model.epochs_run = j.at("epochs_run").get<std::size_t>();
    if (model.weights.size() != model.mask.cardinality()) {
      throw ParseError("model json: weight count does not match mask cardinality");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model json: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << model_to_json(model);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace dissim
