#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dissim/dichotomy.hpp"
#include "dissim/errors.hpp"
#include "dissim/synthetic.hpp"
#include "oracles.hpp"

using namespace dissim;

TEST_CASE("dissimilarity: identity, arithmetic, dimension check") {
  const std::vector<double> x = {1.0, -2.0, 3.0};
  CHECK(dissimilarity(x, x) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(dissimilarity(x, std::vector<double>{0.0, 1.0, 5.0}) ==
        std::vector<double>{1.0, 3.0, 2.0});
  CHECK_THROWS_AS(dissimilarity(x, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("dissimilarity: symmetry and nonnegativity on random pairs") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto a = oracles::random_vector(rng, 16, -5.0, 5.0);
    const auto b = oracles::random_vector(rng, 16, -5.0, 5.0);
    const auto ab = dissimilarity(a, b);
    const auto ba = dissimilarity(b, a);
    CHECK(ab == ba);
    CHECK(std::all_of(ab.begin(), ab.end(), [](double v) { return v >= 0.0; }));
  }
}

TEST_CASE("dissimilarity: elementwise triangle bound on random triples") {
  Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    const auto a = oracles::random_vector(rng, 8, -5.0, 5.0);
    const auto b = oracles::random_vector(rng, 8, -5.0, 5.0);
    const auto c = oracles::random_vector(rng, 8, -5.0, 5.0);
    const auto ac = dissimilarity(a, c);
    const auto ab = dissimilarity(a, b);
    const auto bc = dissimilarity(b, c);
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(ac[k] <= ab[k] + bc[k] + 1e-15);
    }
  }
}

TEST_CASE("fuse_scores: max semantics and permutation invariance") {
  CHECK(fuse_scores(std::vector<double>{0.2, -0.5, 0.9}) == 0.9);
  CHECK(fuse_scores(std::vector<double>{-1.5}) == -1.5);
  CHECK_THROWS_AS(fuse_scores(std::vector<double>{}), UsageError);

  Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    auto scores = oracles::random_vector(rng, 7, -2.0, 2.0);
    const double fused = fuse_scores(scores);
    rng.shuffle(scores);
    CHECK(fuse_scores(scores) == fused);
  }
}

TEST_CASE("fuse_scores: monotone in every partial score") {
  Rng rng(34);
  for (int i = 0; i < 50; ++i) {
    auto scores = oracles::random_vector(rng, 5, -2.0, 2.0);
    const double fused = fuse_scores(scores);
    const std::size_t j = rng.next_below(scores.size());
    scores[j] += rng.next_uniform(0.0, 3.0);
    CHECK(fuse_scores(scores) >= fused);
  }
}

namespace {

Dataset two_writer_dataset() {
  // Two writers, two genuines each (reference + questioned), one skilled each.
  std::vector<SignatureRecord> records;
  records.push_back({1, Label::Genuine, 0, {0.0, 0.0}});
  records.push_back({1, Label::Genuine, 1, {0.1, 0.1}});
  records.push_back({1, Label::SkilledForgery, 0, {0.4, 0.4}});
  records.push_back({2, Label::Genuine, 0, {5.0, 5.0}});
  records.push_back({2, Label::Genuine, 1, {5.1, 5.1}});
  records.push_back({2, Label::SkilledForgery, 0, {5.4, 5.4}});
  return Dataset(std::move(records), 2);
}

}  // namespace

TEST_CASE("build_training_set: exhaustive two-writer case") {
  const Dataset d = two_writer_dataset();
  const auto samples = build_training_set(d, {1, 2}, 1, 1, 1, 77);
  REQUIRE(samples.size() == 4);

  std::size_t positives = 0, negatives = 0;
  for (const auto& s : samples) {
    CHECK((s.writer_id == 1 || s.writer_id == 2));
    CHECK(std::all_of(s.values.begin(), s.values.end(), [](double v) { return v >= 0.0; }));
    if (s.label == PairLabel::Positive) {
      ++positives;
      CHECK(s.kind == PairKind::GenuineVsRef);
    } else {
      ++negatives;
      CHECK(s.kind == PairKind::RandomVsRef);
      // Cross-writer distance dominates in this construction.
      CHECK(s.values[0] > 1.0);
    }
  }
  CHECK(positives == 2);
  CHECK(negatives == 2);
}

TEST_CASE("build_training_set: protocol-scale counts per writer") {
  GeneratorConfig cfg;
  cfg.n_writers = 4;
  cfg.genuine_per_writer = 24;  // 12 references + 10 questioned fit
  cfg.skilled_per_writer = 4;
  cfg.dim = 6;
  cfg.informative_dims = 2;
  const Dataset d = generate(cfg);

  const std::vector<std::int64_t> writers = {1, 2, 3, 4};
  const auto samples = build_training_set(d, writers, 12, 10, 10, 5);
  CHECK(samples.size() == writers.size() * (10 * 12 + 10 * 12));

  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> per_writer;
  for (const auto& s : samples) {
    CHECK(s.kind != PairKind::SkilledVsRef);  // skilled forgeries never train
    CHECK((s.label == PairLabel::Positive) == (s.kind == PairKind::GenuineVsRef));
    auto& [pos, neg] = per_writer[s.writer_id];
    (s.label == PairLabel::Positive ? pos : neg) += 1;
  }
  for (const auto& [writer, counts] : per_writer) {
    CHECK(counts.first == 120);
    CHECK(counts.second == 120);
  }
}

TEST_CASE("build_training_set: deterministic and restricted to given writers") {
  GeneratorConfig cfg;
  cfg.n_writers = 6;
  cfg.genuine_per_writer = 8;
  cfg.skilled_per_writer = 2;
  cfg.dim = 4;
  cfg.informative_dims = 2;
  const Dataset d = generate(cfg);

  const std::vector<std::int64_t> writers = {2, 4, 5};
  const auto a = build_training_set(d, writers, 3, 2, 2, 9);
  const auto b = build_training_set(d, writers, 3, 2, 2, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].values == b[i].values);
    CHECK(a[i].writer_id == b[i].writer_id);
    CHECK(std::set<std::int64_t>{2, 4, 5}.count(a[i].writer_id) == 1);
  }
}

TEST_CASE("build_training_set: error paths") {
  const Dataset d = two_writer_dataset();
  CHECK_THROWS_AS(build_training_set(d, {}, 1, 1, 1, 1), DataError);
  CHECK_THROWS_AS(build_training_set(d, {1}, 1, 1, 1, 1), DataError);   // needs 2+ writers
  CHECK_THROWS_AS(build_training_set(d, {1, 2}, 2, 1, 1, 1), DataError);  // 3 genuines needed
  CHECK_THROWS_AS(build_training_set(d, {1, 2}, 0, 1, 1, 1), ConfigError);
}

TEST_CASE("make_reference_set validates contents") {
  const Dataset d = two_writer_dataset();
  CHECK_THROWS_AS(make_reference_set(1, {}), DataError);
  CHECK_THROWS_AS(make_reference_set(1, {d.records()[3]}), DataError);  // wrong writer
  CHECK_THROWS_AS(make_reference_set(1, {d.records()[2]}), DataError);  // skilled forgery
  const auto refs = make_reference_set(1, {d.records()[0], d.records()[1]});
  CHECK(refs.references.size() == 2);
}
