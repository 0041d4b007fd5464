#pragma once

// Frequentist null-hypothesis tests: z-test for a normal mean with known
// sigma, Wald binomial proportion test, and the one-sided t-test p-value.

#include <cmath>
#include <stdexcept>

#include "lindley/numerics.hpp"

namespace lindley {

struct SampleSummary {
  long long n = 0;   // sample size
  double mean = 0;   // observed sample mean
  double sigma = 0;  // known population standard deviation
};

struct BinomialSummary {
  long long n = 0;          // trial count
  long long successes = 0;  // success count
};

// Which standard error the binomial test statistic uses.  The Wald interval
// always uses the estimate-based SE regardless of this choice.
enum class SeMode { null_based, estimate_based };

struct NhtResult {
  double theta0 = 0;
  double estimate = 0;
  double std_error = 0;
  double t_stat = 0;
  double p_value = 0;
  double ci_lower = 0;
  double ci_upper = 0;
  double confidence_level = 0;
  bool reject = false;
  double alpha = 0;
};

namespace detail {

inline void check_probability(double p, const char* name) {
  require_finite(p, name);
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(name) + " must lie strictly in (0,1)");
  }
}

inline void check_sample(const SampleSummary& s) {
  if (s.n < 1) throw std::domain_error("sample size must be >= 1");
  require_finite(s.mean, "mean");
  require_finite(s.sigma, "sigma");
  if (!(s.sigma > 0.0)) throw std::domain_error("sigma must be > 0");
}

}  // namespace detail

// Two-sided z-test of H0: theta = theta0 given x-bar with known sigma.
// t = sqrt(n)|x-bar - theta0|/sigma, p = 2(1 - Phi(t)).
inline NhtResult z_test(const SampleSummary& sample, double theta0, double alpha,
                        double confidence_level) {
  detail::check_sample(sample);
  require_finite(theta0, "theta0");
  detail::check_probability(alpha, "alpha");
  detail::check_probability(confidence_level, "confidence_level");

  NhtResult r;
  r.theta0 = theta0;
  r.estimate = sample.mean;
  r.std_error = sample.sigma / std::sqrt(static_cast<double>(sample.n));
  r.t_stat = std::fabs(sample.mean - theta0) / r.std_error;
  r.p_value = 2.0 * (1.0 - normal_cdf(r.t_stat));
  const double z = normal_quantile(0.5 * (1.0 + confidence_level));
  r.ci_lower = sample.mean - z * r.std_error;
  r.ci_upper = sample.mean + z * r.std_error;
  r.confidence_level = confidence_level;
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  return r;
}

// Two-sided normal-approximation test of H0: p = p0.  The test statistic SE
// follows se_mode; the reported Wald CI always uses sqrt(phat(1-phat)/n).
inline NhtResult binomial_test(const BinomialSummary& data, double p0, double alpha,
                               double confidence_level,
                               SeMode se_mode = SeMode::estimate_based) {
  if (data.n < 1) throw std::domain_error("trial count must be >= 1");
  if (data.successes < 0 || data.successes > data.n) {
    throw std::domain_error("successes must lie in [0, n]");
  }
  detail::check_probability(p0, "p0");
  detail::check_probability(alpha, "alpha");
  detail::check_probability(confidence_level, "confidence_level");

  const double n = static_cast<double>(data.n);
  const double phat = static_cast<double>(data.successes) / n;
  const double est_se = std::sqrt(phat * (1.0 - phat) / n);
  if (se_mode == SeMode::estimate_based && est_se == 0.0) {
    throw std::domain_error("degenerate estimate-based SE: all trials agree");
  }

  NhtResult r;
  r.theta0 = p0;
  r.estimate = phat;
  r.std_error =
      se_mode == SeMode::null_based ? std::sqrt(p0 * (1.0 - p0) / n) : est_se;
  r.t_stat = std::fabs(phat - p0) / r.std_error;
  r.p_value = 2.0 * (1.0 - normal_cdf(r.t_stat));
  const double z = normal_quantile(0.5 * (1.0 + confidence_level));
  r.ci_lower = phat - z * est_se;
  r.ci_upper = phat + z * est_se;
  r.confidence_level = confidence_level;
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  return r;
}

// One-sided p-value P{T >= t_observed | H0} for a t statistic on n-1 df.
inline double t_test_one_sided(long long n, double t_observed) {
  if (n < 2) throw std::domain_error("one-sided t-test needs n >= 2");
  require_finite(t_observed, "t_observed");
  return 1.0 - student_t_cdf(t_observed, n - 1);
}

}  // namespace lindley
