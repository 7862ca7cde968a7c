#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rarewalk/distributions.hpp"
#include "rarewalk/rng.hpp"

namespace rarewalk {

// Desk-scale ground truth, independent of the chain/estimator code paths:
// deterministic quadrature for small convolution depths and exact rejection
// sampling from the conditional laws.

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::int64_t evaluations = 0;
};

// Globally adaptive Gauss-Kronrod (G7,K15) with interval bisection. The error
// field is the sum of per-interval |K15 - G7| estimates over accepted
// intervals.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                              double hi, double abs_tol, double rel_tol,
                              int max_depth = 48);

enum class OracleMethod { Quadrature, Rejection, ClosedForm };

const char* oracle_method_name(OracleMethod m);

struct OracleResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
  OracleMethod method = OracleMethod::Quadrature;
};

// P(S_depth > a) by recursive convolution,
//   p_1(x) = F̄(x),  p_k(x) = F̄(x) + ∫_0^x p_{k-1}(x-y) f(y) dy,
// with the integrand kink at the base case handled by integrating on [0,x]
// only. Supported for depth 1..4; deeper convolutions are refused.
OracleResult tail_prob_quadrature(const StepDistribution& d, int depth, double a);

// Cost guard for the rejection samplers: refuse up front when a hint says the
// expected number of trials per sample exceeds `max_expected_trials`, and bail
// out if a single sample ever consumes more than `max_trials` attempts.
struct RejectionGuard {
  std::int64_t max_trials = 10'000'000;
  double max_expected_trials = 100'000.0;
  double p_hint = 0.0;  // known event probability, 0 = unknown
};

// Exact draw from n i.i.d. steps conditioned on sum > a, by resampling.
std::vector<double> rejection_sample_fixed(const StepDistribution& d,
                                           std::int64_t n, double a, Rng& rng,
                                           const RejectionGuard& guard = {});

struct RandomSumState {
  std::int64_t count = 0;
  std::vector<double> steps;
};

// Exact draw from (N, steps) conditioned on the random sum exceeding a.
RandomSumState rejection_sample_random(const StepDistribution& d,
                                       const CountDistribution& c, double a,
                                       Rng& rng, const RejectionGuard& guard = {});

// Fixture of precomputed oracle values, one record per line:
//   model,params,a,value,error_bound,method
struct OracleRecord {
  std::string model;
  std::string params;  // ';'-separated key=value pairs
  double a = 0.0;
  double value = 0.0;
  double error_bound = 0.0;
  std::string method;
};

std::vector<OracleRecord> read_oracle_fixture(const std::string& path);
void write_oracle_fixture(const std::string& path,
                          const std::vector<OracleRecord>& records);

// Looks up a record by (model, params, a); throws std::out_of_range if absent.
const OracleRecord& find_oracle_record(const std::vector<OracleRecord>& records,
                                       const std::string& model,
                                       const std::string& params, double a);

}  // namespace rarewalk
