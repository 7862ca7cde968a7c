#include "rarewalk/estimators.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rarewalk/chain_fixed.hpp"
#include "rarewalk/chain_random.hpp"
#include "rarewalk/errors.hpp"
#include "rarewalk/max_conditional.hpp"

namespace rarewalk {

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Mcmc: return "mcmc";
    case EstimatorKind::Mc: return "mc";
    case EstimatorKind::Is: return "is";
  }
  return "unknown";
}

double mcmc_reciprocal_estimate(const EstimatorAccumulator& acc) {
  if (acc.total < 1) {
    throw std::invalid_argument("mcmc_reciprocal_estimate: no observations");
  }
  if (acc.norm_const <= 0.0) {
    throw DegenerateModelError("mcmc_reciprocal_estimate: P(max > a) is zero");
  }
  return (static_cast<double>(acc.hits) / static_cast<double>(acc.total)) /
         acc.norm_const;
}

double clamp_probability_estimate(double qhat) {
  if (qhat < 0.0 || std::isnan(qhat)) {
    throw std::domain_error("clamp_probability_estimate: qhat must be >= 0");
  }
  if (qhat == 0.0) return 1.0;
  const double p = 1.0 / qhat;
  return p < 1.0 ? p : 1.0;
}

namespace {

// Emits trace rows at every multiple of `every` crossed by the draw counter.
class TraceCursor {
 public:
  explicit TraceCursor(TraceSink sink) : sink_(sink), next_mark_(sink.every) {}

  void advance(std::uint64_t draws, double estimate) {
    if (sink_.rows == nullptr || sink_.every <= 0) return;
    while (next_mark_ <= static_cast<std::int64_t>(draws)) {
      sink_.rows->push_back({next_mark_, estimate});
      next_mark_ += sink_.every;
    }
  }

 private:
  TraceSink sink_;
  std::int64_t next_mark_;
};

void check_is_weight(double w) {
  if (!(w > 0.0 && w < 1.0)) {
    throw std::domain_error(
        "mixture importance sampling: weight must lie strictly in (0,1)");
  }
}

}  // namespace

BatchOutcome mcmc_batch_fixed(const StepDistribution& d, std::int64_t n, double a,
                              std::int64_t sweeps, std::int64_t burnin, Rng& rng,
                              TraceSink trace) {
  EstimatorAccumulator acc;
  acc.norm_const = max_tail_fixed(d, n, a);
  if (acc.norm_const <= 0.0) {
    throw DegenerateModelError("mcmc_batch_fixed: P(max > a) underflows");
  }
  GibbsChainFixed chain(d, n, a, rng);
  for (std::int64_t t = 0; t < burnin; ++t) chain.sweep(rng);
  const std::uint64_t start = chain.draws();
  TraceCursor cursor(trace);
  for (std::int64_t t = 0; t < sweeps; ++t) {
    chain.sweep(rng);
    acc.record(chain.max_exceeds_threshold());
    cursor.advance(chain.draws() - start,
                   clamp_probability_estimate(mcmc_reciprocal_estimate(acc)));
  }
  BatchOutcome out;
  out.phat = clamp_probability_estimate(mcmc_reciprocal_estimate(acc));
  out.hit_rate = acc.hit_rate();
  out.hits = acc.hits;
  out.observations = acc.total;
  out.draws = chain.draws() - start;
  return out;
}

BatchOutcome mcmc_batch_random(const StepDistribution& d,
                               const CountDistribution& c, double a,
                               std::uint64_t draw_budget, std::int64_t burnin,
                               Rng& rng, TraceSink trace) {
  EstimatorAccumulator acc;
  acc.norm_const = max_tail_random(d, c, a);
  if (acc.norm_const <= 0.0) {
    throw DegenerateModelError("mcmc_batch_random: P(max > a) underflows");
  }
  GibbsChainRandom chain(d, c, a, rng);
  for (std::int64_t t = 0; t < burnin; ++t) chain.sweep(rng);
  const std::uint64_t start = chain.draws();
  TraceCursor cursor(trace);
  while (chain.draws() - start < draw_budget) {
    chain.sweep(rng);
    acc.record(chain.max_exceeds_threshold());
    cursor.advance(chain.draws() - start,
                   clamp_probability_estimate(mcmc_reciprocal_estimate(acc)));
  }
  BatchOutcome out;
  out.phat = clamp_probability_estimate(mcmc_reciprocal_estimate(acc));
  out.hit_rate = acc.hit_rate();
  out.hits = acc.hits;
  out.observations = acc.total;
  out.draws = chain.draws() - start;
  return out;
}

BatchOutcome mc_batch_fixed(const StepDistribution& d, std::int64_t n, double a,
                            std::int64_t walks, Rng& rng, TraceSink trace) {
  if (walks < 1) throw std::invalid_argument("mc_batch_fixed: walks must be >= 1");
  RunningStats mean;
  std::uint64_t hits = 0;
  std::uint64_t draws = 0;
  TraceCursor cursor(trace);
  for (std::int64_t t = 0; t < walks; ++t) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) sum += d.quantile(rng.open_unit());
    draws += static_cast<std::uint64_t>(n);
    const bool hit = sum > a;
    hits += hit ? 1u : 0u;
    mean.add(hit ? 1.0 : 0.0);
    cursor.advance(draws, mean.mean());
  }
  BatchOutcome out;
  out.phat = mean.mean();
  out.hit_rate = out.phat;
  out.hits = hits;
  out.observations = static_cast<std::uint64_t>(walks);
  out.draws = draws;
  return out;
}

BatchOutcome mc_batch_random(const StepDistribution& d, const CountDistribution& c,
                             double a, std::int64_t walks, Rng& rng,
                             TraceSink trace) {
  if (walks < 1) throw std::invalid_argument("mc_batch_random: walks must be >= 1");
  RunningStats mean;
  std::uint64_t hits = 0;
  std::uint64_t draws = 0;
  TraceCursor cursor(trace);
  for (std::int64_t t = 0; t < walks; ++t) {
    const std::int64_t k = c.sample_truncated(1, rng.open_unit());
    double sum = 0.0;
    for (std::int64_t i = 0; i < k; ++i) sum += d.quantile(rng.open_unit());
    draws += static_cast<std::uint64_t>(k) + 1u;
    const bool hit = sum > a;
    hits += hit ? 1u : 0u;
    mean.add(hit ? 1.0 : 0.0);
    cursor.advance(draws, mean.mean());
  }
  BatchOutcome out;
  out.phat = mean.mean();
  out.hit_rate = out.phat;
  out.hits = hits;
  out.observations = static_cast<std::uint64_t>(walks);
  out.draws = draws;
  return out;
}

BatchOutcome is_batch_fixed(const StepDistribution& d, std::int64_t n, double a,
                            double w, std::int64_t walks, Rng& rng,
                            TraceSink trace) {
  check_is_weight(w);
  if (walks < 1) throw std::invalid_argument("is_batch_fixed: walks must be >= 1");
  const double p_max = max_tail_fixed(d, n, a);
  if (p_max <= 0.0) {
    throw DegenerateModelError("is_batch_fixed: P(max > a) underflows");
  }
  RunningStats mean;
  std::uint64_t hits = 0;
  std::uint64_t draws = 0;
  std::vector<double> buf(static_cast<std::size_t>(n));
  TraceCursor cursor(trace);
  for (std::int64_t t = 0; t < walks; ++t) {
    if (rng.open_unit() < w) {
      for (auto& y : buf) y = d.quantile(rng.open_unit());
    } else {
      sample_max_conditioned_fixed(d, n, a, rng, buf);
    }
    draws += static_cast<std::uint64_t>(n);
    double sum = 0.0;
    double mx = buf.front();
    for (const double y : buf) {
      sum += y;
      mx = std::max(mx, y);
    }
    const bool hit = sum > a;
    hits += hit ? 1u : 0u;
    const double likelihood =
        1.0 / (w + (1.0 - w) * (mx > a ? 1.0 / p_max : 0.0));
    mean.add(hit ? likelihood : 0.0);
    cursor.advance(draws, mean.mean());
  }
  BatchOutcome out;
  out.phat = mean.mean();
  out.hit_rate = static_cast<double>(hits) / static_cast<double>(walks);
  out.hits = hits;
  out.observations = static_cast<std::uint64_t>(walks);
  out.draws = draws;
  return out;
}

BatchOutcome is_batch_random(const StepDistribution& d, const CountDistribution& c,
                             double a, double w, std::int64_t walks, Rng& rng,
                             TraceSink trace) {
  check_is_weight(w);
  if (walks < 1) throw std::invalid_argument("is_batch_random: walks must be >= 1");
  const double p_max = max_tail_random(d, c, a);
  if (p_max <= 0.0) {
    throw DegenerateModelError("is_batch_random: P(max > a) underflows");
  }
  RunningStats mean;
  std::uint64_t hits = 0;
  std::uint64_t draws = 0;
  std::vector<double> buf;
  TraceCursor cursor(trace);
  for (std::int64_t t = 0; t < walks; ++t) {
    std::int64_t k = 0;
    if (rng.open_unit() < w) {
      k = c.sample_truncated(1, rng.open_unit());
      buf.resize(static_cast<std::size_t>(k));
      for (auto& y : buf) y = d.quantile(rng.open_unit());
    } else {
      k = sample_max_conditioned_random(d, c, a, rng, buf);
    }
    draws += static_cast<std::uint64_t>(k) + 1u;
    double sum = 0.0;
    double mx = buf.front();
    for (const double y : buf) {
      sum += y;
      mx = std::max(mx, y);
    }
    const bool hit = sum > a;
    hits += hit ? 1u : 0u;
    const double likelihood =
        1.0 / (w + (1.0 - w) * (mx > a ? 1.0 / p_max : 0.0));
    mean.add(hit ? likelihood : 0.0);
    cursor.advance(draws, mean.mean());
  }
  BatchOutcome out;
  out.phat = mean.mean();
  out.hit_rate = static_cast<double>(hits) / static_cast<double>(walks);
  out.hits = hits;
  out.observations = static_cast<std::uint64_t>(walks);
  out.draws = draws;
  return out;
}

double ModelSpec::p_max() const {
  return is_random() ? max_tail_random(*step, *count, threshold)
                     : max_tail_fixed(*step, n, threshold);
}

double ModelSpec::mean_count() const {
  return is_random() ? count->mean() : static_cast<double>(n);
}

BatchReport aggregate_batches(std::span<const BatchOutcome> outcomes,
                              std::span<const double> batch_seconds) {
  BatchReport report;
  RunningStats means;
  RunningStats secs;
  std::uint64_t hits = 0;
  std::uint64_t obs = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    report.batch_means.push_back(outcomes[i].phat);
    means.add(outcomes[i].phat);
    hits += outcomes[i].hits;
    obs += outcomes[i].observations;
    report.total_draws += outcomes[i].draws;
    if (i < batch_seconds.size()) secs.add(batch_seconds[i]);
  }
  report.avg_est = means.mean();
  report.std_dev = means.sample_std_dev();
  report.hit_rate = obs == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(obs);
  report.observations = obs;
  report.avg_runtime_s = std::round(secs.mean() * 10.0) / 10.0;
  return report;
}

namespace {

void parallel_over_batches(int threads, int batches,
                           const std::function<void(int)>& job) {
  if (threads <= 1 || batches <= 1) {
    for (int i = 0; i < batches; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const int workers = std::min(threads, batches);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int wi = 0; wi < workers; ++wi) {
    pool.emplace_back([&] {
      int i;
      while ((i = next.fetch_add(1)) < batches) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

BatchOutcome run_single_batch(EstimatorKind kind, const ModelSpec& model,
                              const RunShape& shape, Rng& rng, TraceSink sink) {
  switch (kind) {
    case EstimatorKind::Mcmc:
      if (model.is_random()) {
        const auto budget = static_cast<std::uint64_t>(
            std::ceil(static_cast<double>(shape.T) * model.mean_count()));
        return mcmc_batch_random(*model.step, *model.count, model.threshold,
                                 budget, shape.burnin, rng, sink);
      }
      return mcmc_batch_fixed(*model.step, model.n, model.threshold, shape.T,
                              shape.burnin, rng, sink);
    case EstimatorKind::Mc:
      return model.is_random()
                 ? mc_batch_random(*model.step, *model.count, model.threshold,
                                   shape.T, rng, sink)
                 : mc_batch_fixed(*model.step, model.n, model.threshold, shape.T,
                                  rng, sink);
    case EstimatorKind::Is:
      return model.is_random()
                 ? is_batch_random(*model.step, *model.count, model.threshold,
                                   shape.is_weight, shape.T, rng, sink)
                 : is_batch_fixed(*model.step, model.n, model.threshold,
                                  shape.is_weight, shape.T, rng, sink);
  }
  throw std::logic_error("run_single_batch: unknown estimator kind");
}

std::uint64_t estimator_ordinal(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Mcmc: return 1;
    case EstimatorKind::Mc: return 2;
    case EstimatorKind::Is: return 3;
  }
  return 0;
}

}  // namespace

BatchReport batch_run(EstimatorKind kind, const ModelSpec& model,
                      const RunShape& shape, std::uint64_t master_seed,
                      std::vector<TraceRow>* trace_rows) {
  if (shape.batches < 2) {
    throw std::invalid_argument("batch_run: batches must be >= 2");
  }
  if (shape.T < 1) throw std::invalid_argument("batch_run: T must be >= 1");
  const std::uint64_t estimator_seed =
      derive_stream_seed(master_seed, estimator_ordinal(kind));
  std::vector<BatchOutcome> outcomes(static_cast<std::size_t>(shape.batches));
  std::vector<double> seconds(static_cast<std::size_t>(shape.batches), 0.0);
  parallel_over_batches(shape.threads, shape.batches, [&](int i) {
    Rng rng(derive_stream_seed(estimator_seed, static_cast<std::uint64_t>(i)));
    TraceSink sink;
    if (i == 0 && trace_rows != nullptr && shape.trace_every > 0) {
      sink.every = shape.trace_every;
      sink.rows = trace_rows;
    }
    const auto t0 = std::chrono::steady_clock::now();
    outcomes[static_cast<std::size_t>(i)] =
        run_single_batch(kind, model, shape, rng, sink);
    const auto t1 = std::chrono::steady_clock::now();
    seconds[static_cast<std::size_t>(i)] =
        std::chrono::duration<double>(t1 - t0).count();
  });
  return aggregate_batches(outcomes, seconds);
}

std::vector<ProbePoint> normalized_variance_probe_fixed(
    const StepDistribution& d, std::int64_t n, std::span<const double> thresholds,
    std::int64_t sweeps_per_point, std::uint64_t seed) {
  std::vector<ProbePoint> points;
  points.reserve(thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double a = thresholds[i];
    Rng rng(derive_stream_seed(seed, i));
    EstimatorAccumulator acc;
    acc.norm_const = max_tail_fixed(d, n, a);
    run_chain_fixed(d, n, a, sweeps_per_point, std::min<std::int64_t>(1000, sweeps_per_point / 10),
                    rng, [&](const GibbsChainFixed& chain) {
                      acc.record(chain.max_exceeds_threshold());
                    });
    ProbePoint p;
    p.threshold = a;
    p.hit_rate = acc.hit_rate();
    if (acc.hits > 0) {
      p.value = 1.0 / p.hit_rate - 1.0;
      p.defined = true;
    }
    points.push_back(p);
  }
  return points;
}

std::vector<ProbePoint> normalized_variance_probe_random(
    const StepDistribution& d, const CountDistribution& c,
    std::span<const double> thresholds, std::uint64_t draw_budget_per_point,
    std::uint64_t seed) {
  std::vector<ProbePoint> points;
  points.reserve(thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double a = thresholds[i];
    Rng rng(derive_stream_seed(seed, i));
    EstimatorAccumulator acc;
    acc.norm_const = max_tail_random(d, c, a);
    run_chain_random_draw_budget(
        d, c, a, draw_budget_per_point, 1000, rng,
        [&](const GibbsChainRandom& chain) {
          acc.record(chain.max_exceeds_threshold());
        });
    ProbePoint p;
    p.threshold = a;
    p.hit_rate = acc.hit_rate();
    if (acc.hits > 0) {
      p.value = 1.0 / p.hit_rate - 1.0;
      p.defined = true;
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace rarewalk
