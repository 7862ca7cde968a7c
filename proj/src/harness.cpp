#include "rarewalk/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rarewalk {

double ExperimentConfig::threshold() const {
  switch (model) {
    case Model::Fixed:
      return a_scale * static_cast<double>(n);
    case Model::Random:
      switch (count) {
        case CountKind::Geometric: return a_scale / count_param;
        case CountKind::Poisson: return a_scale * count_param;
        case CountKind::None: break;
      }
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

const char* model_name(ExperimentConfig::Model m) {
  return m == ExperimentConfig::Model::Fixed ? "fixed" : "random";
}

const char* count_kind_name(ExperimentConfig::CountKind c) {
  switch (c) {
    case ExperimentConfig::CountKind::None: return "none";
    case ExperimentConfig::CountKind::Geometric: return "geometric";
    case ExperimentConfig::CountKind::Poisson: return "poisson";
  }
  return "unknown";
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> bad;
  if (!(c.beta > 0.0) || !std::isfinite(c.beta)) {
    bad.push_back("beta must be a positive finite number");
  }
  if (!(c.a_scale > 0.0) || !std::isfinite(c.a_scale)) {
    bad.push_back("a must be a positive finite number");
  }
  if (c.model == ExperimentConfig::Model::Fixed) {
    if (c.n < 1) bad.push_back("n must be >= 1 for the fixed model");
    if (c.count != ExperimentConfig::CountKind::None) {
      bad.push_back("a count distribution is only valid for the random model");
    }
  } else {
    switch (c.count) {
      case ExperimentConfig::CountKind::None:
        bad.push_back("the random model requires a count distribution");
        break;
      case ExperimentConfig::CountKind::Geometric:
        if (std::isnan(c.count_param)) {
          bad.push_back("missing rho (geometric count parameter)");
        } else if (!(c.count_param > 0.0 && c.count_param < 1.0)) {
          bad.push_back("rho must lie in (0,1)");
        }
        break;
      case ExperimentConfig::CountKind::Poisson:
        if (std::isnan(c.count_param)) {
          bad.push_back("missing lambda (poisson count parameter)");
        } else if (!(c.count_param > 0.0) || !std::isfinite(c.count_param)) {
          bad.push_back("lambda must be a positive finite number");
        }
        break;
    }
  }
  if (c.estimators.empty()) bad.push_back("at least one estimator is required");
  if (c.T < 1) bad.push_back("T must be >= 1");
  if (c.batches < 2) bad.push_back("batches must be >= 2");
  if (c.burnin < 0) bad.push_back("burnin must be >= 0");
  if (c.trace_every < 0) bad.push_back("trace-every must be >= 0");
  if (c.threads < 0) bad.push_back("threads must be >= 0");
  bool wants_is = false;
  for (const auto kind : c.estimators) wants_is |= (kind == EstimatorKind::Is);
  if (wants_is && !(c.is_weight > 0.0 && c.is_weight < 1.0)) {
    bad.push_back("is-weight must lie strictly in (0,1)");
  }
  return bad;
}

int resolve_threads(const ExperimentConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("RARE_MCMC_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

std::unique_ptr<CountDistribution> make_count(const ExperimentConfig& c) {
  switch (c.count) {
    case ExperimentConfig::CountKind::Geometric:
      return std::make_unique<Geometric>(c.count_param);
    case ExperimentConfig::CountKind::Poisson:
      return std::make_unique<Poisson>(c.count_param);
    case ExperimentConfig::CountKind::None: break;
  }
  return nullptr;
}

std::string fmt_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.5e", x);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto violations = validate_config(config);
  if (!violations.empty()) {
    std::string what = "invalid experiment config:";
    for (const auto& v : violations) what += "\n  - " + v;
    throw std::invalid_argument(what);
  }

  const Pareto step(config.beta);
  const std::unique_ptr<CountDistribution> count = make_count(config);

  ModelSpec model;
  model.step = &step;
  model.count = count.get();
  model.n = config.model == ExperimentConfig::Model::Fixed ? config.n : 1;
  model.threshold = config.threshold();

  RunShape shape;
  shape.T = config.T;
  shape.batches = config.batches;
  shape.burnin = config.burnin;
  shape.is_weight = config.is_weight;
  shape.trace_every = config.trace_every;
  shape.threads = resolve_threads(config);

  ExperimentResult result;
  result.config = config;
  result.threshold = model.threshold;
  result.p_max = model.p_max();

  for (const auto kind : config.estimators) {
    EstimatorReport report;
    report.kind = kind;
    try {
      report.report = batch_run(kind, model, shape, config.seed,
                                config.trace_every > 0 ? &report.trace : nullptr);
    } catch (const std::exception& e) {
      report.failed = true;
      report.error = e.what();
    }
    result.estimators.push_back(std::move(report));
  }
  return result;
}

void write_summary_csv(const ExperimentResult& result, std::ostream& out) {
  out << "estimator,avg_est,std_dev,avg_time_s,p_max,hit_rate,b,T,"
         "model,dist,beta,count,count_param,n,a_scale,threshold,burnin,"
         "is_weight,seed\n";
  const ExperimentConfig& c = result.config;
  for (const auto& est : result.estimators) {
    if (est.failed) continue;
    out << estimator_name(est.kind) << ',' << fmt_sci(est.report.avg_est) << ','
        << fmt_sci(est.report.std_dev) << ',' << fmt_sci(est.report.avg_runtime_s)
        << ',' << fmt_sci(result.p_max) << ',' << fmt_sci(est.report.hit_rate)
        << ',' << c.batches << ',' << c.T << ',' << model_name(c.model)
        << ",pareto," << fmt_sci(c.beta) << ',' << count_kind_name(c.count) << ',';
    if (c.count != ExperimentConfig::CountKind::None) out << fmt_sci(c.count_param);
    out << ',' << c.n << ',' << fmt_sci(c.a_scale) << ','
        << fmt_sci(result.threshold) << ',' << c.burnin << ','
        << fmt_sci(c.is_weight) << ',' << c.seed << '\n';
  }
}

std::string summary_csv(const ExperimentResult& result) {
  std::ostringstream ss;
  write_summary_csv(result, ss);
  return ss.str();
}

void write_trace_csv(const ExperimentResult& result, std::ostream& out) {
  out << "step,estimate,estimator\n";
  for (const auto& est : result.estimators) {
    for (const auto& row : est.trace) {
      out << row.step << ',' << fmt_sci(row.estimate) << ','
          << estimator_name(est.kind) << '\n';
    }
  }
}

std::string trace_csv(const ExperimentResult& result) {
  std::ostringstream ss;
  write_trace_csv(result, ss);
  return ss.str();
}

}  // namespace rarewalk
