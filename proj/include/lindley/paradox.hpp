#pragma once

// Jeffreys-Lindley regime exploration: sweeps over n at fixed t, crossover
// detection, and the fixed-t algebraic identities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lindley/bayes.hpp"
#include "lindley/freq.hpp"
#include "lindley/numerics.hpp"

namespace lindley {

struct SweepRow {
  long long n = 0;
  double t = 0;
  double p_value = 0;
  double bayes_factor = 0;
  double log_bayes_factor = 0;
  double posterior_h0 = 0;
  bool nht_reject = false;
  bool bht_favors_h0 = false;
};

struct ParadoxReport {
  std::vector<SweepRow> rows;               // sorted by n ascending
  std::optional<long long> crossover_n;     // smallest grid n with both flags
  bool limit_check = false;                 // posterior strictly increasing
                                            // over consecutive rows past the
                                            // turning point n = t^2 - 1
};

struct DivergenceReport {
  std::vector<double> t_values;  // t_n = sqrt(n) (theta_a - theta0) / sigma
  bool null_case = false;        // theta_a == theta0: all zeros, H0 true
};

// Sweep n at fixed t with the sigma1 = sigma slab.  p = 2(1 - Phi(t)) is
// constant across rows; the posterior climbs toward 1 as n grows.
inline ParadoxReport sweep_fixed_t(double t, const std::vector<long long>& n_values,
                                   double alpha, double pi0,
                                   double posterior_threshold) {
  require_finite(t, "t");
  if (t < 0.0) throw std::domain_error("t is a magnitude; must be >= 0");
  detail::check_probability(alpha, "alpha");
  detail::check_probability(pi0, "pi0");
  detail::check_probability(posterior_threshold, "posterior_threshold");
  if (n_values.empty()) throw std::domain_error("n_values must be nonempty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw std::domain_error("n values must be >= 1");
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw std::domain_error("n_values must be strictly increasing");
    }
  }

  const double p = 2.0 * (1.0 - normal_cdf(t));
  const bool reject = p < alpha;
  const double turning = t * t - 1.0;

  ParadoxReport report;
  report.rows.reserve(n_values.size());
  report.limit_check = true;
  for (long long n : n_values) {
    SweepRow row;
    row.n = n;
    row.t = t;
    row.p_value = p;
    row.log_bayes_factor = log_bayes_factor_fixed_t(t, static_cast<double>(n));
    row.bayes_factor = LogValue::from_log(row.log_bayes_factor).linear();
    row.posterior_h0 = posterior_from_log_bf(row.log_bayes_factor, pi0);
    row.nht_reject = reject;
    row.bht_favors_h0 = row.posterior_h0 > posterior_threshold;
    if (!report.rows.empty()) {
      const SweepRow& prev = report.rows.back();
      if (static_cast<double>(prev.n) > turning &&
          !(row.posterior_h0 > prev.posterior_h0)) {
        report.limit_check = false;
      }
    }
    if (!report.crossover_n && row.nht_reject && row.bht_favors_h0) {
      report.crossover_n = n;
    }
    report.rows.push_back(row);
  }
  return report;
}

// Smallest integer n in [lo, hi] where the NHT rejects and the posterior
// exceeds the threshold, or nullopt.  The posterior is decreasing in n up to
// n = t^2 - 1 and increasing after, so lo is the only candidate in the head
// and the tail admits a binary search.
inline std::optional<long long> refine_crossover(double t, double alpha, double pi0,
                                                 double posterior_threshold,
                                                 long long lo, long long hi) {
  require_finite(t, "t");
  if (t < 0.0) throw std::domain_error("t is a magnitude; must be >= 0");
  detail::check_probability(alpha, "alpha");
  detail::check_probability(pi0, "pi0");
  detail::check_probability(posterior_threshold, "posterior_threshold");
  if (lo < 1 || hi < lo) throw std::domain_error("need 1 <= lo <= hi");

  const double p = 2.0 * (1.0 - normal_cdf(t));
  if (!(p < alpha)) return std::nullopt;

  auto posterior = [&](long long n) {
    return posterior_from_log_bf(log_bayes_factor_fixed_t(t, static_cast<double>(n)),
                                 pi0);
  };
  if (posterior(lo) > posterior_threshold) return lo;
  if (!(posterior(hi) > posterior_threshold)) return std::nullopt;

  long long a = lo;
  const double turning = t * t - 1.0;
  if (turning > static_cast<double>(lo)) {
    a = std::min(hi, static_cast<long long>(std::ceil(turning)));
  }
  long long b = hi;  // invariant: posterior(b) > threshold
  while (a < b) {
    const long long mid = a + (b - a) / 2;
    if (posterior(mid) > posterior_threshold) {
      b = mid;
    } else {
      a = mid + 1;
    }
  }
  return a;
}

// The xbar_{n+m} (same-sign root) that keeps t fixed when the sample grows
// from n to n+m: xbar_{n+m} = theta0 + (xbar_n - theta0) sqrt(n/(n+m)),
// so (xbar_n-theta0)^2/(xbar_{n+m}-theta0)^2 - 1 = m/n.
inline double mean_shrink_identity(long long n, long long m, double xbar_n,
                                   double theta0) {
  if (n < 1 || m < 1) throw std::domain_error("n and m must be >= 1");
  require_finite(xbar_n, "xbar_n");
  require_finite(theta0, "theta0");
  const double d = xbar_n - theta0;
  if (d == 0.0) {
    throw std::domain_error("xbar_n = theta0 carries no constraint (t = 0)");
  }
  const double shrunk =
      theta0 + d * std::sqrt(static_cast<double>(n) / static_cast<double>(n + m));
  // internal consistency check of the printed identity
  const double ratio = (d * d) / ((shrunk - theta0) * (shrunk - theta0)) - 1.0;
  const double want = static_cast<double>(m) / static_cast<double>(n);
  if (std::fabs(ratio - want) > 1e-12 * std::max(1.0, want)) {
    throw std::runtime_error("mean_shrink_identity: identity check failed");
  }
  return shrunk;
}

// t_n = sqrt(n) (theta_a - theta0) / sigma for each n: diverges whenever
// theta_a != theta0, so a fixed finite t is incompatible with a fixed
// alternative.  theta_a == theta0 returns all zeros, flagged.
inline DivergenceReport divergence_check(double theta_a, double theta0, double sigma,
                                         const std::vector<long long>& n_values) {
  require_finite(theta_a, "theta_a");
  require_finite(theta0, "theta0");
  require_finite(sigma, "sigma");
  if (!(sigma > 0.0)) throw std::domain_error("sigma must be > 0");
  DivergenceReport report;
  report.null_case = theta_a == theta0;
  report.t_values.reserve(n_values.size());
  for (long long n : n_values) {
    if (n < 1) throw std::domain_error("n values must be >= 1");
    report.t_values.push_back(std::sqrt(static_cast<double>(n)) *
                              (theta_a - theta0) / sigma);
  }
  return report;
}

}  // namespace lindley
