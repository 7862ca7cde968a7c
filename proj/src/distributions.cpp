#include "rarewalk/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rarewalk {

namespace {

void require_unit_interval(double u, const char* what) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::domain_error(std::string(what) + ": variate must lie in [0,1)");
  }
}

}  // namespace

double StepDistribution::quantile(double u) const {
  require_unit_interval(u, "quantile");
  return quantile_from_tail(1.0 - u);
}

double StepDistribution::sample_truncated(double c, double u) const {
  require_unit_interval(u, "sample_truncated");
  if (c <= 0.0) return quantile(u);
  const double s = tail(c);
  if (s <= 0.0) {
    throw ThresholdUnreachableError(
        name() + ": tail underflows at threshold " + std::to_string(c));
  }
  // F^{-1}(F(c) + u (1-F(c))) expressed through the tail: F̄ = s (1-u).
  return quantile_from_tail(s * (1.0 - u));
}

Pareto::Pareto(double beta) : beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::domain_error("Pareto: beta must be positive and finite");
  }
}

double Pareto::tail(double x) const {
  if (x <= 0.0) return 1.0;
  return std::exp(-beta_ * std::log1p(x));
}

double Pareto::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-beta_ * std::log1p(x));
}

double Pareto::density(double x) const {
  if (x < 0.0) return 0.0;
  return beta_ * std::exp(-(beta_ + 1.0) * std::log1p(x));
}

double Pareto::log_density(double x) const {
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(beta_) - (beta_ + 1.0) * std::log1p(x);
}

double Pareto::quantile_from_tail(double s) const {
  // x = s^(-1/beta) - 1; expm1 keeps full precision when s is close to 1.
  return std::expm1(-std::log(s) / beta_);
}

std::string Pareto::name() const { return "pareto(beta=" + std::to_string(beta_) + ")"; }

Geometric::Geometric(double rho) : rho_(rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::domain_error("Geometric: rho must lie in (0,1)");
  }
}

double Geometric::pmf(std::int64_t k) const {
  if (k < 1) return 0.0;
  return std::exp(static_cast<double>(k - 1) * std::log1p(-rho_)) * rho_;
}

double Geometric::pgf(double t) const { return rho_ * t / (1.0 - (1.0 - rho_) * t); }

double Geometric::mean() const { return 1.0 / rho_; }

double Geometric::tail_from(std::int64_t k) const {
  if (k <= 1) return 1.0;
  return std::exp(static_cast<double>(k - 1) * std::log1p(-rho_));
}

double Geometric::max_exceedance(double step_tail) const {
  // 1 - g(1-s) = s / (rho + (1-rho) s), exact in the tail variable.
  return step_tail / (rho_ + (1.0 - rho_) * step_tail);
}

std::int64_t Geometric::sample_truncated(std::int64_t kstar, double u) const {
  require_unit_interval(u, "Geometric::sample_truncated");
  if (kstar < 1) kstar = 1;
  if (tail_from(kstar) <= 0.0) {
    throw ThresholdUnreachableError("Geometric: P(N >= kstar) underflows, kstar=" +
                                    std::to_string(kstar));
  }
  // Memorylessness: N | N >= k*  =  k* - 1 + Geometric(rho).
  const double g = std::ceil(std::log1p(-u) / std::log1p(-rho_));
  const std::int64_t draw = g < 1.0 ? 1 : static_cast<std::int64_t>(g);
  return kstar - 1 + draw;
}

std::string Geometric::name() const { return "geometric(rho=" + std::to_string(rho_) + ")"; }

Poisson::Poisson(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("Poisson: lambda must be positive and finite");
  }
  log_lambda_ = std::log(lambda);
  norm_ = -std::expm1(-lambda);
}

double Poisson::pmf(std::int64_t k) const {
  if (k < 1) return 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(-lambda_ + kd * log_lambda_ - std::lgamma(kd + 1.0)) / norm_;
}

double Poisson::pgf(double t) const {
  // E[t^N | N >= 1] = (e^(lambda t) - 1) / (e^lambda - 1).
  return std::expm1(lambda_ * t) / std::expm1(lambda_);
}

double Poisson::mean() const { return lambda_ / norm_; }

double Poisson::tail_from(std::int64_t k) const {
  if (k <= 1) return 1.0;
  // Forward summation of the Poisson pmf from k; terms eventually decay
  // geometrically, so the loop terminates quickly past the mode.
  double term =
      std::exp(-lambda_ + static_cast<double>(k) * log_lambda_ - std::lgamma(static_cast<double>(k) + 1.0));
  double sum = term;
  std::int64_t j = k;
  while (term > sum * 1e-18 || j < k + 8 || static_cast<double>(j) < lambda_) {
    ++j;
    term *= lambda_ / static_cast<double>(j);
    sum += term;
    if (term == 0.0 && static_cast<double>(j) > lambda_) break;
  }
  return sum / norm_;
}

double Poisson::max_exceedance(double step_tail) const {
  // 1 - g(1-s) = expm1(-lambda s) / expm1(-lambda).
  return std::expm1(-lambda_ * step_tail) / std::expm1(-lambda_);
}

std::int64_t Poisson::sample_truncated(std::int64_t kstar, double u) const {
  require_unit_interval(u, "Poisson::sample_truncated");
  if (kstar < 1) kstar = 1;
  const double tail_mass = tail_from(kstar);
  if (tail_mass <= 0.0) {
    throw ThresholdUnreachableError("Poisson: P(N >= kstar) underflows, kstar=" +
                                    std::to_string(kstar));
  }
  // Inverse-cdf scan starting at kstar, with the pmf advanced by its ratio.
  const double target = u * tail_mass;
  std::int64_t k = kstar;
  double pk = pmf(k);
  double cum = pk;
  while (cum <= target) {
    ++k;
    pk *= lambda_ / static_cast<double>(k);
    cum += pk;
    if (pk == 0.0) break;  // exhausted representable mass; return current k
  }
  return k;
}

std::string Poisson::name() const { return "poisson(lambda=" + std::to_string(lambda_) + ")"; }

DegenerateCount::DegenerateCount(std::int64_t k0) : k0_(k0) {
  if (k0 < 1) throw std::domain_error("DegenerateCount: k0 must be >= 1");
}

double DegenerateCount::pmf(std::int64_t k) const { return k == k0_ ? 1.0 : 0.0; }

double DegenerateCount::pgf(double t) const {
  return std::pow(t, static_cast<double>(k0_));
}

double DegenerateCount::mean() const { return static_cast<double>(k0_); }

double DegenerateCount::tail_from(std::int64_t k) const { return k <= k0_ ? 1.0 : 0.0; }

double DegenerateCount::max_exceedance(double step_tail) const {
  if (k0_ == 1) return step_tail;
  return -std::expm1(static_cast<double>(k0_) * std::log1p(-step_tail));
}

std::int64_t DegenerateCount::sample_truncated(std::int64_t kstar, double u) const {
  require_unit_interval(u, "DegenerateCount::sample_truncated");
  if (kstar > k0_) {
    throw ThresholdUnreachableError("DegenerateCount: kstar exceeds the fixed count");
  }
  return k0_;
}

std::string DegenerateCount::name() const {
  return "degenerate(k=" + std::to_string(k0_) + ")";
}

double max_tail_fixed(const StepDistribution& d, std::int64_t n, double a) {
  if (n < 1) throw std::domain_error("max_tail_fixed: n must be >= 1");
  const double s = d.tail(a);
  if (n == 1) return s;  // exact, not via the log1p/expm1 round trip
  if (s >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n) * std::log1p(-s));
}

double max_tail_random(const StepDistribution& d, const CountDistribution& c,
                       double a) {
  return c.max_exceedance(d.tail(a));
}

}  // namespace rarewalk
