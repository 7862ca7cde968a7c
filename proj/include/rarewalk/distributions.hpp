#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "rarewalk/errors.hpp"

namespace rarewalk {

// Nonnegative continuous step law with strictly increasing cdf on its support.
// The tail F̄(x) = 1 - F(x) is the primitive everything else builds on: deep
// thresholds make F(x) indistinguishable from 1 in double precision while
// F̄(x) stays fully resolved.
class StepDistribution {
 public:
  virtual ~StepDistribution() = default;

  virtual double tail(double x) const = 0;
  virtual double cdf(double x) const { return 1.0 - tail(x); }
  virtual double density(double x) const = 0;
  virtual double log_density(double x) const = 0;

  // x with F̄(x) = s, for s in (0,1].
  virtual double quantile_from_tail(double s) const = 0;

  // x with F(x) = u, for u in [0,1). Throws std::domain_error otherwise.
  double quantile(double u) const;

  // Draw from the law of Y conditioned on Y > c, by inverse transform on the
  // variate u in [0,1). c <= 0 means unconditional. Returns c itself only at
  // u = 0; for u > 0 the result is strictly above c.
  double sample_truncated(double c, double u) const;

  virtual std::string name() const = 0;
};

// Pareto with density f(x) = beta (x+1)^(-beta-1) on x >= 0.
class Pareto final : public StepDistribution {
 public:
  explicit Pareto(double beta);

  double beta() const { return beta_; }

  double tail(double x) const override;
  double cdf(double x) const override;
  double density(double x) const override;
  double log_density(double x) const override;
  double quantile_from_tail(double s) const override;
  std::string name() const override;

 private:
  double beta_;
};

// Integer step-count law supported on k = 1, 2, ...
class CountDistribution {
 public:
  virtual ~CountDistribution() = default;

  virtual double pmf(std::int64_t k) const = 0;
  // g(t) = E[t^N] for t in [0,1].
  virtual double pgf(double t) const = 0;
  virtual double mean() const = 0;
  // P(N >= k).
  virtual double tail_from(std::int64_t k) const = 0;

  // P(max of N i.i.d. steps exceeds a level whose step tail is s)
  // = 1 - g(1 - s), computed without forming 1 - s when s is tiny.
  virtual double max_exceedance(double step_tail) const = 0;

  // Draw from N conditioned on N >= kstar via the variate u in [0,1).
  // Throws ThresholdUnreachableError when P(N >= kstar) underflows to zero.
  virtual std::int64_t sample_truncated(std::int64_t kstar, double u) const = 0;

  virtual std::string name() const = 0;
};

// P(N = k) = (1-rho)^(k-1) rho, k = 1, 2, ...
class Geometric final : public CountDistribution {
 public:
  explicit Geometric(double rho);

  double rho() const { return rho_; }

  double pmf(std::int64_t k) const override;
  double pgf(double t) const override;
  double mean() const override;
  double tail_from(std::int64_t k) const override;
  double max_exceedance(double step_tail) const override;
  std::int64_t sample_truncated(std::int64_t kstar, double u) const override;
  std::string name() const override;

 private:
  double rho_;
};

// Poisson(lambda) conditioned on N >= 1 (the count laws here live on k >= 1).
class Poisson final : public CountDistribution {
 public:
  explicit Poisson(double lambda);

  double lambda() const { return lambda_; }

  double pmf(std::int64_t k) const override;
  double pgf(double t) const override;
  double mean() const override;
  double tail_from(std::int64_t k) const override;
  double max_exceedance(double step_tail) const override;
  std::int64_t sample_truncated(std::int64_t kstar, double u) const override;
  std::string name() const override;

 private:
  double lambda_;
  double log_lambda_;
  double norm_;  // P(Poisson >= 1) = 1 - e^(-lambda)
};

// P(N = k0) = 1. Lets the random-sum machinery collapse onto the fixed-length
// model, which several cross-checks exploit.
class DegenerateCount final : public CountDistribution {
 public:
  explicit DegenerateCount(std::int64_t k0);

  double pmf(std::int64_t k) const override;
  double pgf(double t) const override;
  double mean() const override;
  double tail_from(std::int64_t k) const override;
  double max_exceedance(double step_tail) const override;
  std::int64_t sample_truncated(std::int64_t kstar, double u) const override;
  std::string name() const override;

 private:
  std::int64_t k0_;
};

// P(max of n i.i.d. steps > a) = 1 - F(a)^n, via n*log1p(-F̄(a)) so values
// down to the underflow limit keep full relative precision.
double max_tail_fixed(const StepDistribution& d, std::int64_t n, double a);

// P(max of N steps > a) = 1 - g_N(F(a)).
double max_tail_random(const StepDistribution& d, const CountDistribution& c,
                       double a);

}  // namespace rarewalk
