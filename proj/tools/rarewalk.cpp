// Benchmark CLI: runs batched estimator comparisons for heavy-tailed
// random-walk tail probabilities and emits summary/trace CSV files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rarewalk/errors.hpp"
#include "rarewalk/harness.hpp"
#include "rarewalk/oracle.hpp"
#include "rarewalk/rng.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitInfeasible = 3;

std::vector<rarewalk::EstimatorKind> parse_estimators(const std::string& csv) {
  std::vector<rarewalk::EstimatorKind> kinds;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (token == "mcmc") {
      kinds.push_back(rarewalk::EstimatorKind::Mcmc);
    } else if (token == "mc") {
      kinds.push_back(rarewalk::EstimatorKind::Mc);
    } else if (token == "is") {
      kinds.push_back(rarewalk::EstimatorKind::Is);
    } else {
      throw CLI::ValidationError("--estimators",
                                 "unknown estimator '" + token +
                                     "' (expected a subset of mcmc,mc,is)");
    }
  }
  if (kinds.empty()) {
    throw CLI::ValidationError("--estimators", "at least one estimator required");
  }
  return kinds;
}

struct RunOptions {
  std::string model = "fixed";
  double beta = 2.0;
  std::string count = "";
  double rho = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double a = std::numeric_limits<double>::quiet_NaN();
  std::int64_t n = 1;
  std::string estimators = "mcmc,mc,is";
  std::int64_t T = 100000;
  int batches = 25;
  std::int64_t burnin = 0;
  std::uint64_t seed = 1;
  double is_weight = 0.5;
  std::int64_t trace_every = 0;
  int threads = 0;
  std::string summary_path = "summary.csv";
  std::string trace_path = "trace.csv";
};

rarewalk::ExperimentConfig to_config(const RunOptions& opt) {
  rarewalk::ExperimentConfig cfg;
  cfg.model = opt.model == "random" ? rarewalk::ExperimentConfig::Model::Random
                                    : rarewalk::ExperimentConfig::Model::Fixed;
  cfg.beta = opt.beta;
  if (opt.count == "geometric") {
    cfg.count = rarewalk::ExperimentConfig::CountKind::Geometric;
    cfg.count_param = opt.rho;
  } else if (opt.count == "poisson") {
    cfg.count = rarewalk::ExperimentConfig::CountKind::Poisson;
    cfg.count_param = opt.lambda;
  }
  cfg.a_scale = opt.a;
  cfg.n = opt.n;
  cfg.estimators = parse_estimators(opt.estimators);
  cfg.T = opt.T;
  cfg.batches = opt.batches;
  cfg.burnin = opt.burnin;
  cfg.seed = opt.seed;
  cfg.is_weight = opt.is_weight;
  cfg.trace_every = opt.trace_every;
  cfg.threads = opt.threads;
  return cfg;
}

int run_command(const RunOptions& opt) {
  const rarewalk::ExperimentConfig cfg = to_config(opt);
  const auto violations = rarewalk::validate_config(cfg);
  if (!violations.empty()) {
    std::cerr << "configuration error:\n";
    for (const auto& v : violations) std::cerr << "  - " << v << "\n";
    return kExitConfigError;
  }

  const rarewalk::ExperimentResult result = rarewalk::run_experiment(cfg);

  {
    std::ofstream out(opt.summary_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << opt.summary_path << "\n";
      return 1;
    }
    rarewalk::write_summary_csv(result, out);
  }
  if (cfg.trace_every > 0) {
    std::ofstream out(opt.trace_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << opt.trace_path << "\n";
      return 1;
    }
    rarewalk::write_trace_csv(result, out);
  }

  std::printf("model=%s threshold=%.6g p_max=%.6e\n",
              rarewalk::model_name(cfg.model), result.threshold, result.p_max);
  int failures = 0;
  int infeasible = 0;
  for (const auto& est : result.estimators) {
    if (est.failed) {
      ++failures;
      std::cerr << "estimator " << rarewalk::estimator_name(est.kind)
                << " failed: " << est.error << "\n";
      if (est.error.find("underflow") != std::string::npos ||
          est.error.find("infeasible") != std::string::npos) {
        ++infeasible;
      }
      continue;
    }
    std::printf("%-4s  avg=%.6e  std=%.2e  hit_rate=%.4f  t/batch=%.1fs\n",
                rarewalk::estimator_name(est.kind), est.report.avg_est,
                est.report.std_dev, est.report.hit_rate,
                est.report.avg_runtime_s);
  }
  std::printf("wrote %s%s\n", opt.summary_path.c_str(),
              cfg.trace_every > 0 ? (" and " + opt.trace_path).c_str() : "");
  if (failures == static_cast<int>(result.estimators.size())) {
    return infeasible > 0 ? kExitInfeasible : 1;
  }
  return 0;
}

int probe_command(const std::string& model, double beta, std::int64_t n,
                  const std::string& count, double rho, double lambda,
                  const std::vector<double>& thresholds, std::int64_t budget,
                  std::uint64_t seed, const std::string& out_path) {
  const rarewalk::Pareto step(beta);
  std::vector<rarewalk::ProbePoint> points;
  if (model == "fixed") {
    points = rarewalk::normalized_variance_probe_fixed(step, n, thresholds,
                                                       budget, seed);
  } else {
    std::unique_ptr<rarewalk::CountDistribution> cd;
    if (count == "geometric") {
      cd = std::make_unique<rarewalk::Geometric>(rho);
    } else if (count == "poisson") {
      cd = std::make_unique<rarewalk::Poisson>(lambda);
    } else {
      std::cerr << "probe: random model requires --count geometric|poisson\n";
      return kExitConfigError;
    }
    points = rarewalk::normalized_variance_probe_random(
        step, *cd, thresholds, static_cast<std::uint64_t>(budget), seed);
  }
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    out = &file;
  }
  (*out) << "threshold,v,hit_rate,defined\n";
  char buf[128];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.5e,%.5e,%.5e,%d\n", p.threshold,
                  p.defined ? p.value : std::numeric_limits<double>::quiet_NaN(),
                  p.hit_rate, p.defined ? 1 : 0);
    (*out) << buf;
  }
  return 0;
}

// The committed oracle fixture: small-depth convolution tails used as frozen
// ground truth by the test suite.
std::vector<rarewalk::OracleRecord> standard_oracle_table() {
  std::vector<rarewalk::OracleRecord> rows;
  const auto add = [&rows](double beta, int depth, double a) {
    const rarewalk::Pareto d(beta);
    const rarewalk::OracleResult r = rarewalk::tail_prob_quadrature(d, depth, a);
    rarewalk::OracleRecord rec;
    rec.model = "fixed";
    char params[64];
    std::snprintf(params, sizeof(params), "beta=%.17g;n=%d", beta, depth);
    rec.params = params;
    rec.a = a;
    rec.value = r.value;
    rec.error_bound = r.abs_error_bound;
    rec.method = rarewalk::oracle_method_name(r.method);
    rows.push_back(std::move(rec));
  };
  for (const double a : {2.0, 3.0, 4.0, 25.0}) add(2.0, 2, a);
  for (const double a : {2.0, 3.0, 4.0}) add(2.0, 3, a);
  add(2.0, 4, 4.0);
  for (const double a : {5.0, 10.0}) add(1.0, 2, a);
  return rows;
}

int fixture_command(const std::string& out_path, std::int64_t mc_check) {
  const auto rows = standard_oracle_table();
  int bad = 0;
  if (mc_check > 0) {
    for (const auto& rec : rows) {
      double beta = 0.0;
      int depth = 0;
      std::sscanf(rec.params.c_str(), "beta=%lf;n=%d", &beta, &depth);
      const rarewalk::Pareto d(beta);
      rarewalk::Rng rng(0x9a3c0ffeeULL);
      std::int64_t hits = 0;
      for (std::int64_t t = 0; t < mc_check; ++t) {
        double sum = 0.0;
        for (int i = 0; i < depth; ++i) sum += d.quantile(rng.open_unit());
        hits += sum > rec.a ? 1 : 0;
      }
      const double mc = static_cast<double>(hits) / static_cast<double>(mc_check);
      const double sigma =
          std::sqrt(rec.value * (1.0 - rec.value) / static_cast<double>(mc_check));
      const double devs = std::abs(mc - rec.value) / sigma;
      std::printf("%s,%s,a=%g: quad=%.12e mc=%.6e (%.2f sigma)\n",
                  rec.model.c_str(), rec.params.c_str(), rec.a, rec.value, mc,
                  devs);
      if (devs > 3.0) ++bad;
    }
  }
  rarewalk::write_oracle_fixture(out_path, rows);
  std::printf("wrote %zu records to %s\n", rows.size(), out_path.c_str());
  if (bad > 0) {
    std::cerr << bad << " record(s) disagree with the Monte Carlo cross-check\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-event estimators for heavy-tailed random walks"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a batched experiment");
  run_cmd->set_config("--config", "", "Read options from a TOML config file");
  run_cmd->add_option("--model", run.model, "Model: fixed or random")
      ->check(CLI::IsMember({"fixed", "random"}));
  run_cmd->add_option("--beta", run.beta, "Pareto tail index");
  run_cmd->add_option("--count", run.count, "Count law for the random model")
      ->check(CLI::IsMember({"geometric", "poisson"}));
  run_cmd->add_option("--rho", run.rho, "Geometric count parameter");
  run_cmd->add_option("--lambda", run.lambda, "Poisson count parameter");
  run_cmd->add_option("--a", run.a, "Threshold scale (threshold = a*n, a/rho or a*lambda)")
      ->required();
  run_cmd->add_option("--n", run.n, "Number of steps (fixed model)");
  run_cmd->add_option("--estimators", run.estimators,
                      "Comma-separated subset of mcmc,mc,is");
  run_cmd->add_option("--T", run.T, "Simulations per batch");
  run_cmd->add_option("--batches", run.batches, "Number of batches (>= 2)");
  run_cmd->add_option("--burnin", run.burnin, "Discarded sweeps per MCMC batch");
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--is-weight", run.is_weight,
                      "Defensive-mixture weight in (0,1)");
  run_cmd->add_option("--trace-every", run.trace_every,
                      "Trace row every K simulation steps (0 = off)");
  run_cmd->add_option("--threads", run.threads,
                      "Worker threads (0 = RARE_MCMC_THREADS or hardware)");
  run_cmd->add_option("--summary", run.summary_path, "Summary CSV path");
  run_cmd->add_option("--trace", run.trace_path, "Trace CSV path");

  std::string probe_model = "fixed";
  double probe_beta = 2.0;
  std::int64_t probe_n = 5;
  std::string probe_count;
  double probe_rho = std::numeric_limits<double>::quiet_NaN();
  double probe_lambda = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> probe_thresholds;
  std::int64_t probe_budget = 100000;
  std::uint64_t probe_seed = 1;
  std::string probe_out;
  CLI::App* probe_cmd = app.add_subcommand(
      "probe", "Normalized-variance probe over a threshold grid");
  probe_cmd->add_option("--model", probe_model)->check(CLI::IsMember({"fixed", "random"}));
  probe_cmd->add_option("--beta", probe_beta, "Pareto tail index");
  probe_cmd->add_option("--n", probe_n, "Number of steps (fixed model)");
  probe_cmd->add_option("--count", probe_count)->check(CLI::IsMember({"geometric", "poisson"}));
  probe_cmd->add_option("--rho", probe_rho);
  probe_cmd->add_option("--lambda", probe_lambda);
  probe_cmd->add_option("--thresholds", probe_thresholds, "Threshold grid")
      ->required()
      ->delimiter(',');
  probe_cmd->add_option("--budget", probe_budget,
                        "Sweeps (fixed) or draws (random) per grid point");
  probe_cmd->add_option("--seed", probe_seed);
  probe_cmd->add_option("--out", probe_out, "Output CSV path (default stdout)");

  std::string fixture_out = "oracle_values.txt";
  std::int64_t fixture_mc = 0;
  CLI::App* fixture_cmd = app.add_subcommand(
      "fixture", "Recompute the oracle fixture of convolution tails");
  fixture_cmd->add_option("--out", fixture_out, "Fixture path");
  fixture_cmd->add_option("--mc-check", fixture_mc,
                          "Cross-check each record with this many MC samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (run_cmd->parsed()) return run_command(run);
    if (probe_cmd->parsed()) {
      return probe_command(probe_model, probe_beta, probe_n, probe_count,
                           probe_rho, probe_lambda, probe_thresholds,
                           probe_budget, probe_seed, probe_out);
    }
    if (fixture_cmd->parsed()) return fixture_command(fixture_out, fixture_mc);
  } catch (const rarewalk::OracleInfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const rarewalk::ThresholdUnreachableError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
