#include "rarewalk/chain_fixed.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rarewalk/max_conditional.hpp"

namespace rarewalk {

namespace detail {

void conditional_coordinate_pass(const StepDistribution& d, double a,
                                 std::vector<double>& steps,
                                 std::vector<std::uint32_t>& order, double& sum,
                                 Rng& rng) {
  order.resize(steps.size());
  std::iota(order.begin(), order.end(), 0u);
  fisher_yates_shuffle(order, rng);
  for (const std::uint32_t j : order) {
    const double rest = sum - steps[j];
    const double y = d.sample_truncated(a - rest, rng.open_unit());
    sum = rest + y;
    steps[j] = y;
  }
}

}  // namespace detail

GibbsChainFixed::GibbsChainFixed(const StepDistribution& d, std::int64_t n,
                                 double a, Rng& rng)
    : dist_(&d), a_(a) {
  if (n < 1) throw std::domain_error("GibbsChainFixed: n must be >= 1");
  sample_max_conditioned_fixed(d, n, a, rng, steps_);
  draws_ += static_cast<std::uint64_t>(n);
  fisher_yates_shuffle(steps_, rng);
  refresh_caches();
}

GibbsChainFixed::GibbsChainFixed(const StepDistribution& d, double a,
                                 std::vector<double> steps)
    : dist_(&d), a_(a), steps_(std::move(steps)) {
  if (steps_.empty()) throw std::domain_error("GibbsChainFixed: empty state");
  refresh_caches();
  if (!(sum_ > a_)) {
    throw std::invalid_argument("GibbsChainFixed: initial state must have sum > a");
  }
}

void GibbsChainFixed::refresh_caches() {
  sum_ = 0.0;
  max_ = steps_.front();
  for (const double y : steps_) {
    sum_ += y;
    max_ = std::max(max_, y);
  }
  sweeps_since_refresh_ = 0;
}

void GibbsChainFixed::sweep(Rng& rng) {
  detail::conditional_coordinate_pass(*dist_, a_, steps_, order_, sum_, rng);
  fisher_yates_shuffle(steps_, rng);
  draws_ += steps_.size();
  max_ = *std::max_element(steps_.begin(), steps_.end());
  if (++sweeps_since_refresh_ >= 1024) {
    refresh_caches();  // bound incremental-sum drift
  }
}

}  // namespace rarewalk
