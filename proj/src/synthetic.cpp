#include "dissim/synthetic.hpp"

#include <string>

#include "dissim/errors.hpp"
#include "dissim/rng.hpp"

namespace dissim {

namespace {

// Prototypes are drawn uniformly from [0, kPrototypeSpan] per informative
// dimension. With the default spread/offset this makes a random forgery
// (genuine of another writer, expected per-dim gap kPrototypeSpan/3) an
// easier negative than a skilled forgery (per-dim gap ~forgery_offset).
constexpr double kPrototypeSpan = 2.0;

// Noise dimensions carry writer-independent noise at a larger scale than the
// within-writer spread, so carrying them into the masked classifier costs
// measurable accuracy. This is what makes feature selection worthwhile on
// synthetic data.
constexpr double kNoiseDimSpreadFactor = 3.5;

// Each skilled forgery displaces exactly one informative dimension, chosen
// uniformly. A forgery is only detectable on the dimension its forger got
// wrong, so every informative dimension carries its own share of the
// discrimination signal and dropping any of them measurably raises the EER.

void validate(const GeneratorConfig& c) {
  if (c.n_writers == 0) throw ConfigError("generator: n_writers must be >= 1");
  if (c.genuine_per_writer == 0) throw ConfigError("generator: genuine_per_writer must be >= 1");
  if (c.dim == 0) throw ConfigError("generator: dim must be >= 1");
  if (c.informative_dims == 0 || c.informative_dims > c.dim) {
    throw ConfigError("generator: informative_dims must be in [1, dim]");
  }
  if (!(c.writer_spread > 0.0)) throw ConfigError("generator: writer_spread must be > 0");
  if (!(c.forgery_offset > 0.0)) throw ConfigError("generator: forgery_offset must be > 0");
}

}  // namespace

Dataset generate(const GeneratorConfig& config) {
  validate(config);

  std::vector<SignatureRecord> records;
  records.reserve(config.n_writers * (config.genuine_per_writer + config.skilled_per_writer));

  for (std::size_t w = 0; w < config.n_writers; ++w) {
    const std::int64_t writer_id = static_cast<std::int64_t>(w) + 1;
    const std::uint64_t wtag = static_cast<std::uint64_t>(writer_id);

    std::vector<double> prototype(config.dim, 0.0);
    {
      Rng rng(config.seed, {stream::kGenerator, wtag, 0});
      for (std::size_t d = 0; d < config.informative_dims; ++d) {
        prototype[d] = rng.next_uniform(0.0, kPrototypeSpan);
      }
    }

    auto noise_scale = [&](std::size_t d) {
      return d < config.informative_dims ? config.writer_spread
                                         : config.writer_spread * kNoiseDimSpreadFactor;
    };

    for (std::size_t g = 0; g < config.genuine_per_writer; ++g) {
      Rng rng(config.seed, {stream::kGenerator, wtag, 1, g});
      SignatureRecord rec;
      rec.writer_id = writer_id;
      rec.label = Label::Genuine;
      rec.sample_index = static_cast<std::int32_t>(g);
      rec.features.resize(config.dim);
      for (std::size_t d = 0; d < config.dim; ++d) {
        rec.features[d] = prototype[d] + rng.next_normal() * noise_scale(d);
      }
      records.push_back(std::move(rec));
    }

    for (std::size_t f = 0; f < config.skilled_per_writer; ++f) {
      Rng rng(config.seed, {stream::kGenerator, wtag, 2, f});
      SignatureRecord rec;
      rec.writer_id = writer_id;
      rec.label = Label::SkilledForgery;
      rec.sample_index = static_cast<std::int32_t>(f);
      rec.features.resize(config.dim);
      for (std::size_t d = 0; d < config.dim; ++d) {
        rec.features[d] = prototype[d] + rng.next_normal() * noise_scale(d);
      }
      const std::size_t forged_dim = rng.next_below(config.informative_dims);
      const double sign = rng.next_bernoulli(0.5) ? 1.0 : -1.0;
      rec.features[forged_dim] += sign * config.forgery_offset;
      records.push_back(std::move(rec));
    }
  }

  return Dataset(std::move(records), config.dim);
}

}  // namespace dissim
