#pragma once

// Bayesian point-null testing with a spike-and-slab prior: mass pi0 on
// theta0 plus a N(theta0, prior_sd^2) slab over the alternative.

#include <cmath>
#include <stdexcept>

#include "lindley/freq.hpp"
#include "lindley/numerics.hpp"

namespace lindley {

struct BayesConfig {
  double pi0 = 0.5;     // prior mass on H0
  double theta0 = 0.0;  // the point null
  double prior_sd = 0;  // slab standard deviation (sigma1)
};

struct BhtResult {
  double bayes_factor = 0;      // B = f(xbar|theta0) / m_g(xbar)
  double log_bayes_factor = 0;  // exact log-space form
  double posterior_h0 = 0;      // P{H0 | xbar}
  double posterior_odds = 0;    // prior_odds * bayes_factor
  double prior_odds = 0;        // pi0 / (1 - pi0)
  bool implausible_t = false;   // |t| > 1e6: inputs almost surely inconsistent
  BayesConfig config;           // prior actually used
};

namespace detail {

inline void check_config(const BayesConfig& c) {
  check_probability(c.pi0, "pi0");
  require_finite(c.theta0, "theta0");
  require_finite(c.prior_sd, "prior_sd");
  if (!(c.prior_sd > 0.0)) throw std::domain_error("prior_sd must be > 0");
}

}  // namespace detail

// Marginal density of xbar under the slab.  xbar | theta ~ N(theta, sigma^2/n)
// convolved with theta ~ N(theta0, prior_sd^2) is N(theta0, sigma^2/n + prior_sd^2).
inline double marginal_slab(const SampleSummary& sample, const BayesConfig& config) {
  detail::check_sample(sample);
  detail::check_config(config);
  const double se2 = sample.sigma * sample.sigma / static_cast<double>(sample.n);
  return normal_pdf(sample.mean, config.theta0,
                    std::sqrt(se2 + config.prior_sd * config.prior_sd));
}

// Quadrature form for an arbitrary slab density g(theta).  The likelihood
// factor is a needle of width sigma/sqrt(n) at theta = xbar, so that point
// is passed to the integrator as the peak hint.
template <typename Density>
double marginal_slab(const SampleSummary& sample, Density&& g,
                     const QuadratureSpec& spec) {
  detail::check_sample(sample);
  const double se = sample.sigma / std::sqrt(static_cast<double>(sample.n));
  auto integrand = [&](double theta) {
    return normal_pdf(sample.mean, theta, se) * g(theta);
  };
  return integrate(integrand, spec, sample.mean, se);
}

// log B for the sigma1 = sigma slab, where B depends only on (t, n):
// log B = (1/2) log(1+n) - t^2 / (2 (1 + 1/n)).
inline double log_bayes_factor_fixed_t(double t, double n) {
  require_finite(t, "t");
  require_finite(n, "n");
  if (!(n >= 1.0)) throw std::domain_error("n must be >= 1");
  return 0.5 * std::log1p(n) - 0.5 * t * t / (1.0 + 1.0 / n);
}

// Posterior P{H0|x} = logistic(log prior odds + log B).
inline double posterior_from_log_bf(double log_bf, double pi0) {
  detail::check_probability(pi0, "pi0");
  require_finite(log_bf, "log_bf");
  const double log_odds = std::log(pi0) - std::log1p(-pi0) + log_bf;
  return 1.0 / (1.0 + std::exp(-log_odds));
}

// Full spike-and-slab result.  The log Bayes factor is the exact algebraic
// difference of the two normal log densities,
//   log B = (1/2) log(1 + sigma1^2/se^2) - d^2 sigma1^2 / (2 se^2 s^2),
// with se^2 = sigma^2/n, s^2 = se^2 + sigma1^2, d = xbar - theta0; this form
// avoids the cancellation the raw difference suffers when sigma1 << se.
inline BhtResult posterior_h0(const SampleSummary& sample, const BayesConfig& config) {
  detail::check_sample(sample);
  detail::check_config(config);

  const double se2 = sample.sigma * sample.sigma / static_cast<double>(sample.n);
  const double v1 = config.prior_sd * config.prior_sd;
  const double s2 = se2 + v1;
  const double d = sample.mean - config.theta0;

  BhtResult r;
  r.config = config;
  r.implausible_t = std::fabs(d) / std::sqrt(se2) > 1e6;
  r.log_bayes_factor = 0.5 * std::log1p(v1 / se2) - 0.5 * d * d * v1 / (se2 * s2);
  r.bayes_factor = LogValue::from_log(r.log_bayes_factor).linear();
  r.prior_odds = config.pi0 / (1.0 - config.pi0);
  const double log_post_odds =
      std::log(config.pi0) - std::log1p(-config.pi0) + r.log_bayes_factor;
  r.posterior_odds = LogValue::from_log(log_post_odds).linear();
  r.posterior_h0 = 1.0 / (1.0 + std::exp(-log_post_odds));
  return r;
}

// Same computation; named for callers that only need B.
inline BhtResult bayes_factor(const SampleSummary& sample, const BayesConfig& config) {
  return posterior_h0(sample, config);
}

}  // namespace lindley
