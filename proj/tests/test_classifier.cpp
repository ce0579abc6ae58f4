#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "dissim/classifier.hpp"
#include "dissim/errors.hpp"
#include "oracles.hpp"

using namespace dissim;

namespace {

DissimilaritySample sample_of(std::vector<double> values, PairLabel label) {
  DissimilaritySample s;
  s.values = std::move(values);
  s.label = label;
  s.writer_id = 1;
  s.kind = label == PairLabel::Positive ? PairKind::GenuineVsRef : PairKind::RandomVsRef;
  return s;
}

// Dissimilarity-style toy set: positives near the origin, negatives shifted
// well away along both axes. Linearly separable with a wide margin, so the
// hard-margin solution fits inside the hinge weight's box constraint.
std::vector<DissimilaritySample> separable_toy() {
  std::vector<DissimilaritySample> samples;
  Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    samples.push_back(
        sample_of({0.2 * rng.next_double(), 0.2 * rng.next_double()}, PairLabel::Positive));
    samples.push_back(sample_of({6.0 + 0.2 * rng.next_double(), 6.0 + 0.2 * rng.next_double()},
                                PairLabel::Negative));
  }
  return samples;
}

double hinge_sum(const TrainedModel& model, const std::vector<DissimilaritySample>& samples) {
  double total = 0.0;
  for (const auto& s : samples) {
    const double y = s.label == PairLabel::Positive ? 1.0 : -1.0;
    total += std::max(0.0, 1.0 - y * score_dissimilarity(model, s.values));
  }
  return total;
}

}  // namespace

TEST_CASE("feature mask: cardinality matches popcount through mutations") {
  FeatureMask mask(130);
  Rng rng(77);
  std::vector<bool> mirror(130, false);
  for (int step = 0; step < 2000; ++step) {
    const std::size_t i = rng.next_below(130);
    if (rng.next_bernoulli(0.5)) {
      const bool v = rng.next_bernoulli(0.5);
      mask.set(i, v);
      mirror[i] = v;
    } else {
      mask.flip(i);
      mirror[i] = !mirror[i];
    }
    CHECK(mask.test(i) == mirror[i]);
  }
  std::size_t ones = 0;
  for (const bool b : mirror) ones += b ? 1 : 0;
  CHECK(mask.cardinality() == ones);
  const auto idx = mask.selected_indices();
  CHECK(idx.size() == ones);
  CHECK(std::is_sorted(idx.begin(), idx.end()));
}

TEST_CASE("feature mask: hex round-trip and validation") {
  Rng rng(78);
  for (const std::size_t size : {1ul, 7ul, 8ul, 9ul, 64ul, 65ul, 130ul}) {
    FeatureMask mask(size);
    for (std::size_t i = 0; i < size; ++i) mask.set(i, rng.next_bernoulli(0.4));
    const FeatureMask back = FeatureMask::from_hex(mask.to_hex(), size);
    CHECK(back == mask);
    CHECK(back.cardinality() == mask.cardinality());
  }
  CHECK_THROWS_AS(FeatureMask::from_hex("zz", 8), ParseError);
  CHECK_THROWS_AS(FeatureMask::from_hex("ff", 16), ParseError);  // wrong digit count
  CHECK_THROWS_AS(FeatureMask::from_hex("80", 7), ParseError);   // bit beyond size
}

TEST_CASE("feature mask: lexicographic comparison") {
  FeatureMask a = FeatureMask::from_bits({false, true, true});
  FeatureMask b = FeatureMask::from_bits({true, false, false});
  CHECK(FeatureMask::compare_lex(a, b) < 0);  // 011 before 100
  CHECK(FeatureMask::compare_lex(b, a) > 0);
  CHECK(FeatureMask::compare_lex(a, a) == 0);
}

TEST_CASE("train: separable toy reaches zero hinge loss") {
  const auto samples = separable_toy();
  const FeatureMask mask(2, true);
  const TrainedModel model = train(samples, mask, {500.0, 8000, 1e-12, 1});
  CHECK(hinge_sum(model, samples) == doctest::Approx(0.0).epsilon(1e-9));
  for (const auto& s : samples) {
    const double sc = score_dissimilarity(model, s.values);
    if (s.label == PairLabel::Positive) {
      CHECK(sc > 0.0);
    } else {
      CHECK(sc < 0.0);
    }
  }
}

TEST_CASE("train: weights length equals mask cardinality") {
  Rng rng(5);
  const auto samples = oracles::random_instance(rng, 40, 4, 0.3);
  const TrainedModel full = train(samples, FeatureMask(4, true), {});
  CHECK(full.weights.size() == 4);
  FeatureMask partial(4);
  partial.set(1, true);
  partial.set(3, true);
  CHECK(train(samples, partial, {}).weights.size() == 2);
}

TEST_CASE("train: duplicating every sample keeps the decision boundary") {
  Rng rng(6);
  const auto samples = oracles::random_instance(rng, 60, 3, 0.5);
  auto doubled = samples;
  doubled.insert(doubled.end(), samples.begin(), samples.end());

  const SvmHyper hyper{1.0, 4000, 1e-12, 1};
  const TrainedModel a = train(samples, FeatureMask(3, true), hyper);
  const TrainedModel b = train(doubled, FeatureMask(3, true), hyper);

  auto normalized = [](const TrainedModel& m) {
    std::vector<double> v = m.weights;
    v.push_back(m.bias);
    double norm = 0.0;
    for (const double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
  };
  const auto na = normalized(a);
  const auto nb = normalized(b);
  for (std::size_t i = 0; i < na.size(); ++i) {
    CHECK(na[i] == doctest::Approx(nb[i]).epsilon(1e-6));
  }
}

TEST_CASE("train: masking equivalence with pre-masked data") {
  Rng rng(7);
  const auto samples = oracles::random_instance(rng, 50, 6, 0.4);
  FeatureMask mask(6);
  mask.set(0, true);
  mask.set(2, true);
  mask.set(5, true);

  std::vector<DissimilaritySample> premasked = samples;
  for (auto& s : premasked) {
    s.values = {s.values[0], s.values[2], s.values[5]};
  }

  const TrainedModel via_mask = train(samples, mask, {});
  const TrainedModel via_data = train(premasked, FeatureMask(3, true), {});
  REQUIRE(via_mask.weights.size() == via_data.weights.size());
  for (std::size_t i = 0; i < via_mask.weights.size(); ++i) {
    CHECK(std::fabs(via_mask.weights[i] - via_data.weights[i]) < 1e-9);
  }
  CHECK(std::fabs(via_mask.bias - via_data.bias) < 1e-9);
}

TEST_CASE("train: deterministic given identical inputs") {
  Rng rng(8);
  const auto samples = oracles::random_instance(rng, 45, 5, 0.45);
  const TrainedModel a = train(samples, FeatureMask(5, true), {});
  const TrainedModel b = train(samples, FeatureMask(5, true), {});
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
  CHECK(a.epochs_run == b.epochs_run);
}

TEST_CASE("train: error paths") {
  Rng rng(9);
  const auto samples = oracles::random_instance(rng, 20, 3, 0.3);
  CHECK_THROWS_AS(train(samples, FeatureMask(3), {}), DegenerateMaskError);

  std::vector<DissimilaritySample> one_label;
  for (const auto& s : samples) {
    if (s.label == PairLabel::Positive) one_label.push_back(s);
  }
  CHECK_THROWS_AS(train(one_label, FeatureMask(3, true), {}), DataError);
}

TEST_CASE("score: zero dissimilarity reference and single-reference identity") {
  const auto samples = separable_toy();
  const TrainedModel model = train(samples, FeatureMask(2, true), {});

  SignatureRecord ref{1, Label::Genuine, 0, {0.7, 0.9}};
  const auto refs = make_reference_set(1, {ref});
  const std::vector<double> questioned = {0.7, 0.9};

  // Identical questioned/reference: the single partial score is the score of
  // the zero dissimilarity vector.
  const double fused = score(model, questioned, refs);
  CHECK(fused == score_dissimilarity(model, std::vector<double>{0.0, 0.0}));

  // Adding a reference never lowers the fused score.
  Rng rng(10);
  for (int i = 0; i < 30; ++i) {
    auto more = refs.references;
    more.push_back({1, Label::Genuine, 1,
                    {rng.next_uniform(0.0, 3.0), rng.next_uniform(0.0, 3.0)}});
    CHECK(score(model, questioned, make_reference_set(1, more)) >= fused);
  }
}

TEST_CASE("score: invariant to masked-out dimensions") {
  Rng rng(11);
  const auto samples = oracles::random_instance(rng, 40, 4, 0.4);
  FeatureMask mask(4);
  mask.set(0, true);
  mask.set(2, true);
  const TrainedModel model = train(samples, mask, {});

  SignatureRecord ref{1, Label::Genuine, 0, {0.5, 0.5, 0.5, 0.5}};
  const auto refs = make_reference_set(1, {ref});
  std::vector<double> questioned = {1.0, 2.0, 3.0, 4.0};
  const double base = score(model, questioned, refs);
  for (int i = 0; i < 20; ++i) {
    questioned[1] = rng.next_uniform(-100.0, 100.0);
    questioned[3] = rng.next_uniform(-100.0, 100.0);
    CHECK(score(model, questioned, refs) == base);
  }
  CHECK_THROWS_AS(score(model, std::vector<double>{1.0}, refs), DimensionError);
}

TEST_CASE("model json round-trip") {
  const auto samples = separable_toy();
  FeatureMask mask(2, true);
  const TrainedModel model = train(samples, mask, {2.0, 800, 1e-9, 3});

  const auto path =
      (std::filesystem::temp_directory_path() / "dissim_model_roundtrip.json").string();
  save_model(model, path);
  const TrainedModel back = load_model(path);
  CHECK(back.weights == model.weights);
  CHECK(back.bias == model.bias);
  CHECK(back.mask == model.mask);
  CHECK(back.hyper.c == model.hyper.c);
  CHECK(back.hyper.seed == model.hyper.seed);
  CHECK(back.objective == model.objective);

  CHECK_THROWS_AS(model_from_json("{not json"), ParseError);
}
