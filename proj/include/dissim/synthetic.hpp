#pragma once

#include <cstdint>

#include "dissim/data_model.hpp"

namespace dissim {

// Deterministic writer-population generator. Each writer has a prototype
// vector that is nonzero only on the first `informative_dims` dimensions;
// genuine signatures are the prototype plus Gaussian noise, and each skilled
// forgery displaces one informative dimension by +-forgery_offset (the trait
// its forger got wrong). The remaining dimensions carry writer-independent
// noise for every signature, so they are useless for same/different-writer
// discrimination by construction.
struct GeneratorConfig {
  std::size_t n_writers = 60;
  std::size_t genuine_per_writer = 24;
  std::size_t skilled_per_writer = 10;
  std::size_t dim = 64;
  std::size_t informative_dims = 16;
  double writer_spread = 0.30;  // within-writer genuine noise scale
  double forgery_offset = 5.0;  // skilled-forgery displacement along informative dims
  std::uint64_t seed = 1;
};

Dataset generate(const GeneratorConfig& config);

}  // namespace dissim
