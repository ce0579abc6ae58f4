#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

#include "dissim/data_model.hpp"
#include "dissim/errors.hpp"
#include "dissim/synthetic.hpp"

using namespace dissim;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dissim_test_data_model";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

bool features_bit_equal(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ra = a.records()[i];
    const auto& rb = b.records()[i];
    if (ra.writer_id != rb.writer_id || ra.label != rb.label ||
        ra.sample_index != rb.sample_index) {
      return false;
    }
    if (std::memcmp(ra.features.data(), rb.features.data(), a.dim() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

Dataset tiny_writers(std::size_t n_writers, std::size_t dim) {
  std::vector<SignatureRecord> records;
  for (std::size_t w = 1; w <= n_writers; ++w) {
    records.push_back({static_cast<std::int64_t>(w), Label::Genuine, 0,
                       std::vector<double>(dim, static_cast<double>(w))});
  }
  return Dataset(std::move(records), dim);
}

}  // namespace

TEST_CASE("load: header-driven parse of a small file") {
  const auto path = temp_file("small.csv");
  write_text(path,
             "writer_id,label,sample_index,f0,f1,f2\n"
             "1,G,0,0.5,1,2\n"
             "1,S,0,-0.25,0,1e-3\n"
             "2,G,0,3,4,5\n"
             "2,G,1,6,7,8\n");
  const Dataset d = load_feature_file(path.string());
  CHECK(d.size() == 4);
  CHECK(d.dim() == 3);
  CHECK(d.writer_ids() == std::vector<std::int64_t>{1, 2});
  CHECK(d.records()[1].label == Label::SkilledForgery);
  CHECK(d.records()[3].features == std::vector<double>{6.0, 7.0, 8.0});
  CHECK(d.indices_of(2, Label::Genuine).size() == 2);
}

TEST_CASE("load: NaN value is rejected with the line number") {
  const auto path = temp_file("nan.csv");
  write_text(path,
             "writer_id,label,sample_index,f0,f1\n"
             "1,G,0,1,2\n"
             "1,G,1,NaN,2\n");
  CHECK_THROWS_WITH_AS(load_feature_file(path.string()),
                       doctest::Contains("line 3"), ParseError);
}

TEST_CASE("load: wrong column count is rejected with the line number") {
  const auto path = temp_file("cols.csv");
  write_text(path,
             "writer_id,label,sample_index,f0,f1\n"
             "1,G,0,1\n");
  CHECK_THROWS_WITH_AS(load_feature_file(path.string()),
                       doctest::Contains("line 2"), ParseError);
}

TEST_CASE("load: bad label and malformed header") {
  const auto bad_label = temp_file("label.csv");
  write_text(bad_label, "writer_id,label,sample_index,f0\n1,X,0,1\n");
  CHECK_THROWS_AS(load_feature_file(bad_label.string()), ParseError);

  const auto bad_header = temp_file("header.csv");
  write_text(bad_header, "writer,label,sample_index,f0\n1,G,0,1\n");
  CHECK_THROWS_AS(load_feature_file(bad_header.string()), ParseError);
}

TEST_CASE("load: 2048-dim rows with expected_dim=2048") {
  GeneratorConfig cfg;
  cfg.n_writers = 2;
  cfg.genuine_per_writer = 1;
  cfg.skilled_per_writer = 0;
  cfg.dim = 2048;
  cfg.informative_dims = 32;
  const Dataset d = generate(cfg);
  const auto path = temp_file("wide.csv");
  save_feature_file(d, path.string());
  const Dataset back = load_feature_file(path.string(), 2048);
  CHECK(back.dim() == 2048);
  CHECK_THROWS_AS(load_feature_file(path.string(), 64), SchemaError);
}

TEST_CASE("round-trip: save then load is bit-identical, plain and gzip") {
  GeneratorConfig cfg;
  cfg.n_writers = 6;
  cfg.genuine_per_writer = 4;
  cfg.skilled_per_writer = 2;
  cfg.dim = 9;
  cfg.informative_dims = 3;
  cfg.seed = 99;
  const Dataset d = generate(cfg);

  const auto plain = temp_file("roundtrip.csv");
  save_feature_file(d, plain.string());
  CHECK(features_bit_equal(d, load_feature_file(plain.string())));

  const auto gz = temp_file("roundtrip.csv.gz");
  save_feature_file(d, gz.string());
  CHECK(fs::file_size(gz) < fs::file_size(plain));  // actually compressed
  CHECK(features_bit_equal(d, load_feature_file(gz.string())));
}

TEST_CASE("split: benchmark-sized partition") {
  const Dataset d = tiny_writers(881, 2);
  const WriterSplit split = split_writers(d, {146, 145, 145, 145, 300}, 7);
  CHECK(split.train_writers.size() == 146);
  CHECK(split.validation_writers.size() == 145);
  CHECK(split.opt_writers.size() == 145);
  CHECK(split.sel_writers.size() == 145);
  CHECK(split.exploitation_writers.size() == 300);
  CHECK(split.pairwise_disjoint());
}

TEST_CASE("split: exhaustive partition of four writers") {
  const Dataset d = tiny_writers(4, 2);
  const WriterSplit split = split_writers(d, {1, 1, 1, 1, 0}, 3);
  std::set<std::int64_t> all;
  for (const auto* s :
       {&split.train_writers, &split.validation_writers, &split.opt_writers, &split.sel_writers}) {
    CHECK(s->size() == 1);
    all.insert(s->begin(), s->end());
  }
  CHECK(all == std::set<std::int64_t>{1, 2, 3, 4});
  CHECK(split.exploitation_writers.empty());
}

TEST_CASE("split: deterministic, pure in writer ids, counts validated") {
  const Dataset d1 = tiny_writers(20, 2);
  const Dataset d2 = tiny_writers(20, 5);  // same writers, different payload
  const SplitCounts counts{6, 4, 4, 3, 3};
  const WriterSplit a = split_writers(d1, counts, 11);
  const WriterSplit b = split_writers(d1, counts, 11);
  const WriterSplit c = split_writers(d2, counts, 11);
  CHECK(a.train_writers == b.train_writers);
  CHECK(a.sel_writers == b.sel_writers);
  CHECK(a.train_writers == c.train_writers);
  CHECK(a.exploitation_writers == c.exploitation_writers);

  const WriterSplit other = split_writers(d1, counts, 12);
  CHECK(a.train_writers != other.train_writers);  // overwhelmingly likely

  CHECK_THROWS_AS(split_writers(d1, {20, 1, 0, 0, 0}, 1), ConfigError);
}

TEST_CASE("split: disjointness over random seeds") {
  const Dataset d = tiny_writers(30, 2);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    CHECK(split_writers(d, {10, 5, 5, 5, 5}, seed).pairwise_disjoint());
  }
}

TEST_CASE("select_samples: deterministic k-subset without duplicates") {
  std::vector<SignatureRecord> records;
  for (int i = 0; i < 24; ++i) {
    records.push_back({5, Label::Genuine, i, {static_cast<double>(i)}});
  }
  const Dataset d(std::move(records), 1);

  const auto twelve = select_samples(d, 5, Label::Genuine, 12, 42);
  CHECK(twelve.size() == 12);
  std::set<std::int32_t> seen;
  for (const auto& r : twelve) seen.insert(r.sample_index);
  CHECK(seen.size() == 12);

  const auto again = select_samples(d, 5, Label::Genuine, 12, 42);
  for (std::size_t i = 0; i < 12; ++i) CHECK(again[i].sample_index == twelve[i].sample_index);

  CHECK(select_samples(d, 5, Label::Genuine, 0, 1).empty());
  CHECK_THROWS_WITH_AS(select_samples(d, 5, Label::SkilledForgery, 10, 1),
                       doctest::Contains("writer 5"), DataError);
}

TEST_CASE("dataset invariants are enforced at construction") {
  CHECK_THROWS_AS(Dataset({{0, Label::Genuine, 0, {1.0}}}, 1), DataError);  // writer_id < 1
  CHECK_THROWS_AS(Dataset({{1, Label::Genuine, 0, {1.0, 2.0}}}, 1), DataError);  // dim mismatch
  CHECK_THROWS_AS(Dataset({{1, Label::Genuine, 0, {std::nan("")}}}, 1), DataError);
}
