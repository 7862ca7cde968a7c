#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

// Shared statistical machinery for the test suites: Kolmogorov-Smirnov and
// chi-squared comparisons at fixed significance levels.

namespace testsup {

// Asymptotic Kolmogorov critical coefficient at the 1% level.
inline constexpr double kKs01 = 1.628;

inline double ks_statistic_vs_cdf(std::vector<double> sample,
                                  const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double fx = cdf(sample[i]);
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - fx,
                             fx - static_cast<double>(i) / n));
  }
  return d;
}

inline double ks_one_sample_critical(std::size_t n, double coeff = kKs01) {
  return coeff / std::sqrt(static_cast<double>(n));
}

inline double ks_statistic_two_sample(std::vector<double> a,
                                      std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

inline double ks_two_sample_critical(std::size_t n1, std::size_t n2,
                                     double coeff = kKs01) {
  const double m = static_cast<double>(n1);
  const double n = static_cast<double>(n2);
  return coeff * std::sqrt((m + n) / (m * n));
}

inline double chi_squared_quantile_99(int df) {
  boost::math::chi_squared dist(df);
  return boost::math::quantile(dist, 0.99);
}

// Two-sample chi-squared homogeneity test over integer categories. Categories
// are merged from the right until every pooled expected count is at least 5.
// Returns true when the statistic stays below the 1% critical value.
struct ChiSquaredOutcome {
  double statistic = 0.0;
  double critical = 0.0;
  int df = 0;
  bool pass = false;
};

inline ChiSquaredOutcome chi_squared_two_sample(
    const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::map<std::int64_t, std::pair<double, double>> counts;
  for (const auto v : a) counts[v].first += 1.0;
  for (const auto v : b) counts[v].second += 1.0;

  // Collapse sparse cells (pooled count < 10, i.e. expected ~5 per group for
  // equal sizes) into their left neighbor, scanning from the tail.
  std::vector<std::pair<double, double>> cells;
  for (const auto& [value, c] : counts) cells.push_back(c);
  for (std::size_t i = cells.size(); i-- > 1;) {
    if (cells[i].first + cells[i].second < 10.0) {
      cells[i - 1].first += cells[i].first;
      cells[i - 1].second += cells[i].second;
      cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  if (cells.size() > 1 && cells[0].first + cells[0].second < 10.0) {
    cells[1].first += cells[0].first;
    cells[1].second += cells[0].second;
    cells.erase(cells.begin());
  }

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double total = na + nb;
  ChiSquaredOutcome out;
  if (cells.size() < 2) {
    out.pass = true;
    return out;
  }
  for (const auto& [ca, cb] : cells) {
    const double pooled = (ca + cb) / total;
    const double ea = pooled * na;
    const double eb = pooled * nb;
    out.statistic += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  out.df = static_cast<int>(cells.size()) - 1;
  out.critical = chi_squared_quantile_99(out.df);
  out.pass = out.statistic < out.critical;
  return out;
}

// One-sample chi-squared goodness of fit over integer categories against
// given category probabilities (indexed from `first`). Cells are merged from
// the right until every expected count is at least 5; any probability mass
// beyond the listed categories goes to the final cell.
inline ChiSquaredOutcome chi_squared_one_sample(
    const std::vector<std::int64_t>& sample, std::int64_t first,
    const std::vector<double>& probs) {
  const double n = static_cast<double>(sample.size());
  std::vector<double> observed(probs.size() + 1, 0.0);
  for (const auto v : sample) {
    const auto idx = static_cast<std::size_t>(
        std::clamp<std::int64_t>(v - first, 0, static_cast<std::int64_t>(probs.size())));
    observed[idx] += 1.0;
  }
  std::vector<double> expected(probs.size() + 1, 0.0);
  double used = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    expected[i] = probs[i] * n;
    used += probs[i];
  }
  expected.back() = std::max(0.0, 1.0 - used) * n;
  for (std::size_t i = expected.size(); i-- > 1;) {
    if (expected[i] < 5.0) {
      expected[i - 1] += expected[i];
      observed[i - 1] += observed[i];
      expected.erase(expected.begin() + static_cast<std::ptrdiff_t>(i));
      observed.erase(observed.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  ChiSquaredOutcome out;
  if (expected.size() < 2) {
    out.pass = true;
    return out;
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    out.statistic += diff * diff / expected[i];
  }
  out.df = static_cast<int>(expected.size()) - 1;
  out.critical = chi_squared_quantile_99(out.df);
  out.pass = out.statistic < out.critical;
  return out;
}

}  // namespace testsup
