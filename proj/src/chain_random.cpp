#include "rarewalk/chain_random.hpp"

#include <algorithm>
#include <stdexcept>

#include "rarewalk/chain_fixed.hpp"
#include "rarewalk/max_conditional.hpp"

namespace rarewalk {

std::int64_t compute_kstar(std::span<const double> steps, double a) {
  double prefix = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    prefix += steps[i];
    if (prefix > a) return static_cast<std::int64_t>(i) + 1;
  }
  throw std::logic_error("compute_kstar: total does not exceed the threshold");
}

GibbsChainRandom::GibbsChainRandom(const StepDistribution& d,
                                   const CountDistribution& c, double a,
                                   Rng& rng)
    : dist_(&d), count_dist_(&c), a_(a) {
  const std::int64_t n0 = c.sample_truncated(1, rng.open_unit());
  draws_ += 1;
  sample_max_conditioned_fixed(d, n0, a, rng, steps_);
  draws_ += static_cast<std::uint64_t>(n0);
  fisher_yates_shuffle(steps_, rng);
  refresh_caches();
}

GibbsChainRandom::GibbsChainRandom(const StepDistribution& d,
                                   const CountDistribution& c, double a,
                                   std::vector<double> steps)
    : dist_(&d), count_dist_(&c), a_(a), steps_(std::move(steps)) {
  if (steps_.empty()) throw std::domain_error("GibbsChainRandom: empty state");
  refresh_caches();  // throws via compute_kstar when sum <= a
}

void GibbsChainRandom::refresh_caches() {
  sum_ = 0.0;
  max_ = steps_.front();
  for (const double y : steps_) {
    sum_ += y;
    max_ = std::max(max_, y);
  }
  kstar_ = compute_kstar(steps_, a_);
  sweeps_since_refresh_ = 0;
}

void GibbsChainRandom::resample_count(Rng& rng) {
  const std::int64_t old_count = count();
  const std::int64_t next = count_dist_->sample_truncated(kstar_, rng.open_unit());
  draws_ += 1;
  if (next < old_count) {
    steps_.resize(static_cast<std::size_t>(next));
    sum_ = 0.0;
    for (const double y : steps_) sum_ += y;
    max_ = *std::max_element(steps_.begin(), steps_.end());
  } else if (next > old_count) {
    steps_.reserve(static_cast<std::size_t>(next));
    for (std::int64_t i = old_count; i < next; ++i) {
      const double y = dist_->quantile(rng.open_unit());
      steps_.push_back(y);
      sum_ += y;
      max_ = std::max(max_, y);
    }
    draws_ += static_cast<std::uint64_t>(next - old_count);
  }
}

void GibbsChainRandom::sweep(Rng& rng) {
  resample_count(rng);
  detail::conditional_coordinate_pass(*dist_, a_, steps_, order_, sum_, rng);
  draws_ += steps_.size();
  fisher_yates_shuffle(steps_, rng);
  max_ = *std::max_element(steps_.begin(), steps_.end());
  kstar_ = compute_kstar(steps_, a_);
  if (++sweeps_since_refresh_ >= 1024) {
    refresh_caches();
  }
}

}  // namespace rarewalk
