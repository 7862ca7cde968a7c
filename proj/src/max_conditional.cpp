#include "rarewalk/max_conditional.hpp"

#include <cmath>
#include <string>

namespace rarewalk {

namespace {

// Smallest j in [1,n] with P(first exceedance index <= j) >= u, where the
// cumulative is (1 - F(a)^j) / (1 - F(a)^n), evaluated through log1p so deep
// tails keep full precision. The j = n cumulative is exactly 1.
std::int64_t first_exceedance_index(double log_one_minus_tail, double p_max,
                                    std::int64_t n, double u) {
  std::int64_t lo = 1, hi = n;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    const double cum =
        -std::expm1(static_cast<double>(mid) * log_one_minus_tail) / p_max;
    if (cum >= u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

void sample_max_conditioned_fixed(const StepDistribution& d, std::int64_t n,
                                  double a, Rng& rng, std::vector<double>& out) {
  if (n < 1) throw std::domain_error("sample_max_conditioned_fixed: n must be >= 1");
  const double sbar = d.tail(a);
  if (sbar <= 0.0) {
    throw ThresholdUnreachableError(
        "sample_max_conditioned_fixed: tail underflows at a=" + std::to_string(a));
  }
  out.resize(static_cast<std::size_t>(n));
  if (sbar >= 1.0) {
    // Threshold at or below the support: conditioning is vacuous.
    for (auto& y : out) y = d.quantile(rng.open_unit());
    return;
  }
  const double log_q = std::log1p(-sbar);
  const double p_max = -std::expm1(static_cast<double>(n) * log_q);
  const double fa = d.cdf(a);
  const std::int64_t j = first_exceedance_index(log_q, p_max, n, rng.open_unit());
  for (std::int64_t i = 1; i < j; ++i) {
    out[static_cast<std::size_t>(i - 1)] = d.quantile(rng.open_unit() * fa);
  }
  out[static_cast<std::size_t>(j - 1)] = d.sample_truncated(a, rng.open_unit());
  for (std::int64_t i = j + 1; i <= n; ++i) {
    out[static_cast<std::size_t>(i - 1)] = d.quantile(rng.open_unit());
  }
}

std::int64_t sample_max_conditioned_random(const StepDistribution& d,
                                           const CountDistribution& c, double a,
                                           Rng& rng, std::vector<double>& out) {
  const double sbar = d.tail(a);
  if (sbar <= 0.0) {
    throw ThresholdUnreachableError(
        "sample_max_conditioned_random: tail underflows at a=" + std::to_string(a));
  }
  const double p_max = c.max_exceedance(sbar);
  if (p_max <= 0.0) {
    throw DegenerateModelError("sample_max_conditioned_random: P(max > a) is zero");
  }
  // N | max > a has pmf proportional to pmf(k) (1 - F(a)^k); inverse-cdf scan.
  const double log_q = sbar < 1.0 ? std::log1p(-sbar) : 0.0;
  const double u = rng.open_unit();
  double cum = 0.0;
  std::int64_t k = 0;
  constexpr std::int64_t kMaxScan = 10'000'000;
  while (k < kMaxScan) {
    ++k;
    const double exceed_k =
        sbar >= 1.0 ? 1.0 : -std::expm1(static_cast<double>(k) * log_q);
    cum += c.pmf(k) * exceed_k / p_max;
    if (cum >= u) break;
  }
  if (k >= kMaxScan) {
    throw OracleInfeasibleError(
        "sample_max_conditioned_random: count scan failed to terminate");
  }
  sample_max_conditioned_fixed(d, k, a, rng, out);
  return k;
}

}  // namespace rarewalk
