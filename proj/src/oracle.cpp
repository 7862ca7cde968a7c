#include "rarewalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rarewalk/errors.hpp"

namespace rarewalk {

namespace {

// (G7,K15) nodes and weights on [-1,1], Kronrod abscissae in decreasing order.
// The Gauss points are the odd-indexed Kronrod abscissae.
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussW[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};

struct PanelEstimate {
  double kronrod = 0.0;
  double error = 0.0;
};

PanelEstimate gk15_panel(const std::function<double(double)>& f, double lo,
                         double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_mid = f(mid);
  double kronrod = kKronrodW[7] * f_mid;
  double gauss = kGaussW[3] * f_mid;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodX[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodW[i] * pair;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * pair;
  }
  PanelEstimate est;
  est.kronrod = kronrod * half;
  est.error = std::abs((kronrod - gauss) * half);
  return est;
}

void integrate_recursive(const std::function<double(double)>& f, double lo,
                         double hi, double abs_tol, double rel_tol, int depth,
                         int max_depth, QuadResult& out) {
  const PanelEstimate est = gk15_panel(f, lo, hi);
  out.evaluations += 15;
  const double tol = std::max(abs_tol, rel_tol * std::abs(est.kronrod));
  if (est.error <= tol || depth >= max_depth) {
    out.value += est.kronrod;
    out.abs_error += est.error;
    return;
  }
  const double mid = 0.5 * (lo + hi);
  integrate_recursive(f, lo, mid, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, out);
  integrate_recursive(f, mid, hi, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, out);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                              double hi, double abs_tol, double rel_tol,
                              int max_depth) {
  QuadResult out;
  if (!(hi > lo)) return out;
  integrate_recursive(f, lo, hi, abs_tol, rel_tol, 0, max_depth, out);
  return out;
}

const char* oracle_method_name(OracleMethod m) {
  switch (m) {
    case OracleMethod::Quadrature: return "quadrature";
    case OracleMethod::Rejection: return "rejection";
    case OracleMethod::ClosedForm: return "closed_form";
  }
  return "unknown";
}

namespace {

// p_k(x) with the per-level tolerance tightened so nested error stays inside
// the reported bound.
double convolution_tail(const StepDistribution& d, int depth, double x,
                        double abs_tol, double& error_accum) {
  if (x <= 0.0) return 1.0;
  if (depth == 1) return d.tail(x);
  const double inner_tol = abs_tol / 8.0;
  const auto integrand = [&](double y) {
    double ignored = 0.0;
    return convolution_tail(d, depth - 1, x - y, inner_tol, ignored) *
           d.density(y);
  };
  const QuadResult q =
      integrate_adaptive(integrand, 0.0, x, abs_tol, 1e-12, 48);
  error_accum += q.abs_error + inner_tol;
  return d.tail(x) + q.value;
}

}  // namespace

OracleResult tail_prob_quadrature(const StepDistribution& d, int depth, double a) {
  if (depth < 1) throw std::invalid_argument("tail_prob_quadrature: depth must be >= 1");
  if (depth > 4) {
    throw std::invalid_argument(
        "tail_prob_quadrature: convolution depth > 4 unsupported");
  }
  OracleResult result;
  if (depth == 1 || a <= 0.0) {
    result.value = a <= 0.0 ? 1.0 : d.tail(a);
    result.abs_error_bound = 0.0;
    result.method = OracleMethod::ClosedForm;
    return result;
  }
  double error = 0.0;
  const double value = convolution_tail(d, depth, a, 1e-13, error);
  result.value = value;
  result.abs_error_bound = std::max(error, 1e-15 * value);
  result.method = OracleMethod::Quadrature;
  return result;
}

namespace {

void check_expected_cost(const RejectionGuard& guard) {
  if (guard.p_hint > 0.0 && 1.0 / guard.p_hint > guard.max_expected_trials) {
    throw OracleInfeasibleError(
        "rejection sampler: expected trials per sample exceed the cost guard");
  }
}

}  // namespace

std::vector<double> rejection_sample_fixed(const StepDistribution& d,
                                           std::int64_t n, double a, Rng& rng,
                                           const RejectionGuard& guard) {
  if (n < 1) throw std::domain_error("rejection_sample_fixed: n must be >= 1");
  check_expected_cost(guard);
  std::vector<double> steps(static_cast<std::size_t>(n));
  for (std::int64_t trial = 0; trial < guard.max_trials; ++trial) {
    double sum = 0.0;
    for (auto& y : steps) {
      y = d.quantile(rng.open_unit());
      sum += y;
    }
    if (sum > a) return steps;
  }
  throw OracleInfeasibleError("rejection_sample_fixed: trial budget exhausted");
}

RandomSumState rejection_sample_random(const StepDistribution& d,
                                       const CountDistribution& c, double a,
                                       Rng& rng, const RejectionGuard& guard) {
  check_expected_cost(guard);
  RandomSumState state;
  for (std::int64_t trial = 0; trial < guard.max_trials; ++trial) {
    state.count = c.sample_truncated(1, rng.open_unit());
    state.steps.resize(static_cast<std::size_t>(state.count));
    double sum = 0.0;
    for (auto& y : state.steps) {
      y = d.quantile(rng.open_unit());
      sum += y;
    }
    if (sum > a) return state;
  }
  throw OracleInfeasibleError("rejection_sample_random: trial budget exhausted");
}

std::vector<OracleRecord> read_oracle_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_oracle_fixture: cannot open " + path);
  }
  std::vector<OracleRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::stringstream ss(line);
    OracleRecord rec;
    std::string field;
    std::getline(ss, rec.model, ',');
    std::getline(ss, rec.params, ',');
    std::getline(ss, field, ',');
    rec.a = std::stod(field);
    std::getline(ss, field, ',');
    rec.value = std::stod(field);
    std::getline(ss, field, ',');
    rec.error_bound = std::stod(field);
    std::getline(ss, rec.method, ',');
    records.push_back(std::move(rec));
  }
  return records;
}

void write_oracle_fixture(const std::string& path,
                          const std::vector<OracleRecord>& records) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_oracle_fixture: cannot open " + path);
  }
  out << "# model,params,a,value,error_bound,method\n";
  char buf[256];
  for (const auto& rec : records) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.3g,%s\n",
                  rec.model.c_str(), rec.params.c_str(), rec.a, rec.value,
                  rec.error_bound, rec.method.c_str());
    out << buf;
  }
}

const OracleRecord& find_oracle_record(const std::vector<OracleRecord>& records,
                                       const std::string& model,
                                       const std::string& params, double a) {
  for (const auto& rec : records) {
    if (rec.model == model && rec.params == params && rec.a == a) return rec;
  }
  throw std::out_of_range("find_oracle_record: no record for " + model + "," +
                          params + ",a=" + std::to_string(a));
}

}  // namespace rarewalk
