#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rarewalk/distributions.hpp"
#include "rarewalk/rng.hpp"

namespace rarewalk {

// First-passage index: smallest 1-based j with steps[0] + ... + steps[j-1]
// strictly above a. Requires the full sum to exceed a; throws std::logic_error
// otherwise.
std::int64_t compute_kstar(std::span<const double> steps, double a);

// Gibbs sampler over (N, steps) whose invariant law is the random-sum model
// conditioned on the sum exceeding a. Each sweep first resamples the count
// from its law truncated below at the first-passage index, then updates all
// coordinates as in the fixed-length chain.
class GibbsChainRandom {
 public:
  // Draws N0 from the unconditional count law and the steps from the step law
  // conditioned on the maximum exceeding a, then permutes.
  GibbsChainRandom(const StepDistribution& d, const CountDistribution& c,
                   double a, Rng& rng);

  // Starts from an explicit step vector (count = steps.size()); requires
  // sum(steps) > a.
  GibbsChainRandom(const StepDistribution& d, const CountDistribution& c,
                   double a, std::vector<double> steps);

  // Step (1) of the update: draw N' >= kstar, truncate the step vector to its
  // first N' entries or extend it with unconditional step draws. The state
  // keeps sum > a because the kept prefix already crosses the threshold.
  void resample_count(Rng& rng);

  // One full iteration: resample_count, conditional coordinate pass over the
  // new count, uniform permutation, caches (including kstar) recomputed.
  void sweep(Rng& rng);

  std::span<const double> steps() const { return steps_; }
  std::int64_t count() const { return static_cast<std::int64_t>(steps_.size()); }
  std::int64_t kstar() const { return kstar_; }
  double threshold() const { return a_; }
  double sum() const { return sum_; }
  double max() const { return max_; }
  bool max_exceeds_threshold() const { return max_ > a_; }

  // Single-variate draws consumed: one per count resample, one per appended
  // step, one per coordinate update.
  std::uint64_t draws() const { return draws_; }

 private:
  void refresh_caches();

  const StepDistribution* dist_;
  const CountDistribution* count_dist_;
  double a_;
  std::vector<double> steps_;
  std::vector<std::uint32_t> order_;
  double sum_ = 0.0;
  double max_ = 0.0;
  std::int64_t kstar_ = 1;
  std::uint64_t draws_ = 0;
  std::int64_t sweeps_since_refresh_ = 0;
};

template <typename Observer>
void run_chain_random(const StepDistribution& d, const CountDistribution& c,
                      double a, std::int64_t record_sweeps, std::int64_t burnin,
                      Rng& rng, Observer&& observe) {
  GibbsChainRandom chain(d, c, a, rng);
  for (std::int64_t t = 0; t < burnin; ++t) chain.sweep(rng);
  for (std::int64_t t = 0; t < record_sweeps; ++t) {
    chain.sweep(rng);
    observe(static_cast<const GibbsChainRandom&>(chain));
  }
}

// Budgeted variant: sweeps until the recorded phase has consumed at least
// `draw_budget` single-variate draws (sweeps have variable cost). Returns the
// number of recorded sweeps.
template <typename Observer>
std::int64_t run_chain_random_draw_budget(const StepDistribution& d,
                                          const CountDistribution& c, double a,
                                          std::uint64_t draw_budget,
                                          std::int64_t burnin, Rng& rng,
                                          Observer&& observe) {
  GibbsChainRandom chain(d, c, a, rng);
  for (std::int64_t t = 0; t < burnin; ++t) chain.sweep(rng);
  const std::uint64_t start = chain.draws();
  std::int64_t recorded = 0;
  while (chain.draws() - start < draw_budget) {
    chain.sweep(rng);
    observe(static_cast<const GibbsChainRandom&>(chain));
    ++recorded;
  }
  return recorded;
}

}  // namespace rarewalk
