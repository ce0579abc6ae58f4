#pragma once

// Shared fixture: a desk-size verification problem small enough for
// optimizer tests and mask enumeration.

#include <memory>

#include "dissim/data_model.hpp"
#include "dissim/dichotomy.hpp"
#include "dissim/fitness.hpp"
#include "dissim/prototype_selection.hpp"
#include "dissim/rng.hpp"
#include "dissim/synthetic.hpp"

namespace test_support {

struct TinyProblem {
  dissim::Dataset dataset;
  dissim::WriterSplit split;
  std::unique_ptr<dissim::FitnessContext> ctx;
  std::unique_ptr<dissim::EvalSet> test_eval;
  std::size_t dim = 0;
  std::size_t informative_dims = 0;
};

struct TinyOptions {
  std::size_t dim = 10;
  std::size_t informative_dims = 4;
  std::size_t references = 3;
  double writer_spread = 0.30;
  double forgery_offset = 4.0;
  unsigned workers = 1;
};

inline TinyProblem make_tiny_problem(std::uint64_t seed, const TinyOptions& opt = {}) {
  dissim::GeneratorConfig gen;
  gen.n_writers = 12;
  gen.genuine_per_writer = 8;  // references + questioned roles fit
  gen.skilled_per_writer = 4;
  gen.dim = opt.dim;
  gen.informative_dims = opt.informative_dims;
  gen.writer_spread = opt.writer_spread;
  gen.forgery_offset = opt.forgery_offset;
  gen.seed = seed;

  TinyProblem p{dissim::generate(gen), {}, nullptr, nullptr, opt.dim, opt.informative_dims};
  p.split = dissim::split_writers(p.dataset, {4, 0, 3, 3, 2}, seed);

  auto training = dissim::build_training_set(p.dataset, p.split.train_writers, opt.references,
                                             3, 3, seed);
  auto condensed = dissim::condense(training, seed);
  auto opt_eval = dissim::build_eval_set(p.dataset, p.split.opt_writers, opt.references, 4, 4,
                                         seed + 1);
  auto sel_eval = dissim::build_eval_set(p.dataset, p.split.sel_writers, opt.references, 4, 4,
                                         seed + 2);
  p.test_eval = std::make_unique<dissim::EvalSet>(dissim::build_eval_set(
      p.dataset, p.split.exploitation_writers, opt.references, 4, 4, seed + 3));
  p.ctx = std::make_unique<dissim::FitnessContext>(std::move(condensed), std::move(opt_eval),
                                                   std::move(sel_eval), dissim::SvmHyper{},
                                                   opt.workers);
  return p;
}

}  // namespace test_support
