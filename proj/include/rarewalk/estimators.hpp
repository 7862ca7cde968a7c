#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rarewalk/distributions.hpp"
#include "rarewalk/rng.hpp"
#include "rarewalk/stats.hpp"

namespace rarewalk {

enum class EstimatorKind { Mcmc, Mc, Is };

const char* estimator_name(EstimatorKind kind);

// Running indicator counts for the reciprocal-probability estimator.
struct EstimatorAccumulator {
  std::uint64_t hits = 0;   // observed states with max step above the threshold
  std::uint64_t total = 0;  // observed states
  double norm_const = 0.0;  // P(max > a)

  void record(bool hit) {
    hits += hit ? 1u : 0u;
    ++total;
  }
  double hit_rate() const {
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  }
};

// q̂ = (hits/total) / norm_const, the estimator of 1/p. Unbiased under the
// chain's invariant law. Throws DegenerateModelError when norm_const is zero.
double mcmc_reciprocal_estimate(const EstimatorAccumulator& acc);

// p̂ = min(1/q̂, 1); by convention 1 when q̂ = 0 (no hits observed).
double clamp_probability_estimate(double qhat);

// Convergence-trace hook: when `every` > 0, the runner records the running
// probability estimate each time the cumulative draw count crosses a multiple
// of `every`.
struct TraceRow {
  std::int64_t step = 0;
  double estimate = 0.0;
};

struct TraceSink {
  std::int64_t every = 0;
  std::vector<TraceRow>* rows = nullptr;
};

// Result of one batch of one estimator.
struct BatchOutcome {
  double phat = 0.0;
  double hit_rate = 0.0;  // unweighted fraction of target-event indicators
  std::uint64_t hits = 0;
  std::uint64_t observations = 0;  // chain states or walks
  std::uint64_t draws = 0;         // single-variate simulation draws consumed
};

// --- single-batch runners ---------------------------------------------------

BatchOutcome mcmc_batch_fixed(const StepDistribution& d, std::int64_t n, double a,
                              std::int64_t sweeps, std::int64_t burnin, Rng& rng,
                              TraceSink trace = {});

BatchOutcome mcmc_batch_random(const StepDistribution& d,
                               const CountDistribution& c, double a,
                               std::uint64_t draw_budget, std::int64_t burnin,
                               Rng& rng, TraceSink trace = {});

BatchOutcome mc_batch_fixed(const StepDistribution& d, std::int64_t n, double a,
                            std::int64_t walks, Rng& rng, TraceSink trace = {});

BatchOutcome mc_batch_random(const StepDistribution& d, const CountDistribution& c,
                             double a, std::int64_t walks, Rng& rng,
                             TraceSink trace = {});

// Defensive mixture: sample from w F + (1-w) V with V the step law conditioned
// on max > a, weight by the exact likelihood ratio
//   L = 1 / (w + (1-w) I{max > a} / P(max > a)).
// Requires w in (0,1): w = 0 would miss {sum > a, max <= a}, w = 1 is plain MC.
BatchOutcome is_batch_fixed(const StepDistribution& d, std::int64_t n, double a,
                            double w, std::int64_t walks, Rng& rng,
                            TraceSink trace = {});

BatchOutcome is_batch_random(const StepDistribution& d, const CountDistribution& c,
                             double a, double w, std::int64_t walks, Rng& rng,
                             TraceSink trace = {});

// --- batched experiments -----------------------------------------------------

// What to simulate: a fixed-length walk (count == nullptr) or a random sum.
struct ModelSpec {
  const StepDistribution* step = nullptr;
  const CountDistribution* count = nullptr;
  std::int64_t n = 1;        // fixed-model length
  double threshold = 0.0;

  bool is_random() const { return count != nullptr; }
  double p_max() const;
  double mean_count() const;
};

struct RunShape {
  std::int64_t T = 0;  // walks per batch; MCMC budget is T*n or ceil(T*E[N]) draws
  int batches = 2;
  std::int64_t burnin = 0;
  double is_weight = 0.5;
  std::int64_t trace_every = 0;
  int threads = 1;
};

struct BatchReport {
  std::vector<double> batch_means;  // per-batch p̂ by batch index
  double avg_est = 0.0;             // mean of batch means
  double std_dev = 0.0;             // sample std dev across batch means
  double avg_runtime_s = 0.0;       // wall clock per batch, 0.1 s resolution
  double hit_rate = 0.0;            // pooled across batches
  std::uint64_t total_draws = 0;
  std::uint64_t observations = 0;
};

BatchReport aggregate_batches(std::span<const BatchOutcome> outcomes,
                              std::span<const double> batch_seconds);

// Runs shape.batches independent batches of one estimator. Batch i uses the
// RNG stream derive(derive(master_seed, estimator ordinal), i), so the result
// is a pure function of (model, shape, master_seed) regardless of thread
// count. Trace rows, when requested, come from batch 0 only.
BatchReport batch_run(EstimatorKind kind, const ModelSpec& model,
                      const RunShape& shape, std::uint64_t master_seed,
                      std::vector<TraceRow>* trace_rows = nullptr);

// --- normalized-variance probe ----------------------------------------------

// For each threshold, estimates v(a) = 1/P(max > a | sum > a) - 1 from the
// chain's hit rate; v is the chain estimator's normalized variance proxy and
// decays to zero as the event becomes rarer. `defined` is false when no hits
// were observed.
struct ProbePoint {
  double threshold = 0.0;
  double value = 0.0;
  double hit_rate = 0.0;
  bool defined = false;
};

std::vector<ProbePoint> normalized_variance_probe_fixed(
    const StepDistribution& d, std::int64_t n, std::span<const double> thresholds,
    std::int64_t sweeps_per_point, std::uint64_t seed);

std::vector<ProbePoint> normalized_variance_probe_random(
    const StepDistribution& d, const CountDistribution& c,
    std::span<const double> thresholds, std::uint64_t draw_budget_per_point,
    std::uint64_t seed);

}  // namespace rarewalk
