#pragma once

#include <cstdint>
#include <vector>

#include "rarewalk/distributions.hpp"
#include "rarewalk/rng.hpp"

namespace rarewalk {

// Exact draw from the law of n i.i.d. steps conditioned on max > a,
// decomposed by the first index exceeding a: coordinates before that index
// are conditioned below a, the index itself above a, the rest unconditional.
// The resulting vector has exactly the conditional law (it is exchangeable
// even though the construction reads left to right). Overwrites `out`.
void sample_max_conditioned_fixed(const StepDistribution& d, std::int64_t n,
                                  double a, Rng& rng, std::vector<double>& out);

// Random-sum version: draws (N, steps) conditioned on the maximum of the N
// steps exceeding a. Returns N; overwrites `out` with the steps.
std::int64_t sample_max_conditioned_random(const StepDistribution& d,
                                           const CountDistribution& c, double a,
                                           Rng& rng, std::vector<double>& out);

}  // namespace rarewalk
