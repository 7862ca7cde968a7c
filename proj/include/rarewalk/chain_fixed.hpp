#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rarewalk/distributions.hpp"
#include "rarewalk/rng.hpp"

namespace rarewalk {

namespace detail {

// One full-conditional pass: visit coordinates in the order given, resampling
// each from its step law conditioned on the total staying above the threshold.
// `sum` is maintained incrementally. Consumes exactly steps.size() variates.
void conditional_coordinate_pass(const StepDistribution& d, double a,
                                 std::vector<double>& steps,
                                 std::vector<std::uint32_t>& order, double& sum,
                                 Rng& rng);

}  // namespace detail

// Gibbs sampler over step vectors of fixed length n whose invariant law is the
// i.i.d. step law conditioned on the sum exceeding the threshold a. Every
// state it ever exposes satisfies sum > a.
class GibbsChainFixed {
 public:
  // Draws the initial state from the step law conditioned on the maximum
  // exceeding a (one forced exceedance), then applies a uniform permutation.
  GibbsChainFixed(const StepDistribution& d, std::int64_t n, double a, Rng& rng);

  // Starts from an explicit state; requires sum(steps) > a.
  GibbsChainFixed(const StepDistribution& d, double a, std::vector<double> steps);

  // One iteration: random update order over all coordinates, conditional
  // resampling of each, then a uniform permutation of the vector.
  void sweep(Rng& rng);

  std::span<const double> steps() const { return steps_; }
  std::int64_t size() const { return static_cast<std::int64_t>(steps_.size()); }
  double threshold() const { return a_; }
  double sum() const { return sum_; }
  double max() const { return max_; }
  bool max_exceeds_threshold() const { return max_ > a_; }

  // Count of single-variate draws consumed so far (n per sweep; permutation
  // and ordering randomness is not counted as simulation work).
  std::uint64_t draws() const { return draws_; }

 private:
  void refresh_caches();

  const StepDistribution* dist_;
  double a_;
  std::vector<double> steps_;
  std::vector<std::uint32_t> order_;
  double sum_ = 0.0;
  double max_ = 0.0;
  std::uint64_t draws_ = 0;
  std::int64_t sweeps_since_refresh_ = 0;
};

// Initializes the chain, discards `burnin` sweeps, then performs
// `record_sweeps` sweeps invoking `observe(chain)` after each one.
template <typename Observer>
void run_chain_fixed(const StepDistribution& d, std::int64_t n, double a,
                     std::int64_t record_sweeps, std::int64_t burnin, Rng& rng,
                     Observer&& observe) {
  GibbsChainFixed chain(d, n, a, rng);
  for (std::int64_t t = 0; t < burnin; ++t) chain.sweep(rng);
  for (std::int64_t t = 0; t < record_sweeps; ++t) {
    chain.sweep(rng);
    observe(static_cast<const GibbsChainFixed&>(chain));
  }
}

}  // namespace rarewalk
