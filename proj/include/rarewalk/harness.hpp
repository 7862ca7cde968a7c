#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "rarewalk/estimators.hpp"

namespace rarewalk {

// Declarative description of one benchmark experiment. The threshold follows
// the scale conventions of the benchmark tables: a*n for the fixed-length
// walk, a/rho for geometric counts, a*lambda for Poisson counts.
struct ExperimentConfig {
  enum class Model { Fixed, Random };
  enum class CountKind { None, Geometric, Poisson };

  Model model = Model::Fixed;
  double beta = std::numeric_limits<double>::quiet_NaN();
  CountKind count = CountKind::None;
  double count_param = std::numeric_limits<double>::quiet_NaN();  // rho | lambda
  double a_scale = std::numeric_limits<double>::quiet_NaN();
  std::int64_t n = 1;
  std::vector<EstimatorKind> estimators = {EstimatorKind::Mcmc, EstimatorKind::Mc,
                                           EstimatorKind::Is};
  std::int64_t T = 0;
  int batches = 0;
  std::int64_t burnin = 0;
  std::uint64_t seed = 0;
  double is_weight = 0.5;
  std::int64_t trace_every = 0;
  int threads = 0;  // 0 = RARE_MCMC_THREADS env var, then hardware concurrency

  double threshold() const;
};

const char* model_name(ExperimentConfig::Model m);
const char* count_kind_name(ExperimentConfig::CountKind c);

// Every violated constraint, one message each; empty means the config is valid.
std::vector<std::string> validate_config(const ExperimentConfig& config);

int resolve_threads(const ExperimentConfig& config);

struct EstimatorReport {
  EstimatorKind kind = EstimatorKind::Mcmc;
  bool failed = false;
  std::string error;
  BatchReport report;
  std::vector<TraceRow> trace;
};

struct ExperimentResult {
  ExperimentConfig config;
  double threshold = 0.0;
  double p_max = 0.0;
  std::vector<EstimatorReport> estimators;
};

// Runs each requested estimator with matched simulation budgets (T walks per
// batch for MC/IS; T*n or ceil(T*E[N]) draws per batch for MCMC). Fully
// deterministic given (config, seed); a failing estimator is reported in its
// slot without disturbing the others. Throws std::invalid_argument listing
// all violations when the config is invalid.
ExperimentResult run_experiment(const ExperimentConfig& config);

// summary.csv: one row per successful estimator. Reals use 6 significant
// digits in scientific notation; lines end with LF.
void write_summary_csv(const ExperimentResult& result, std::ostream& out);
std::string summary_csv(const ExperimentResult& result);

// trace.csv: step,estimate,estimator rows for every traced estimator.
void write_trace_csv(const ExperimentResult& result, std::ostream& out);
std::string trace_csv(const ExperimentResult& result);

}  // namespace rarewalk
