#pragma once

// Seeded Monte Carlo harness: type-I error calibration, CI coverage, and
// paradox frequency (NHT rejects while B > 1) under a known truth.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lindley/bayes.hpp"
#include "lindley/freq.hpp"
#include "lindley/numerics.hpp"

namespace lindley {

struct McConfig {
  double theta_true = 0;  // actual parameter generating the data
  double theta0 = 0;      // hypothesized value under test
  double sigma = 1;
  long long n = 1;
  double alpha = 0.05;
  double pi0 = 0.5;
  long long replications = 1;
  std::uint64_t seed = 0;
};

struct McReport {
  double reject_rate = 0;
  double coverage_rate = 0;
  double paradox_rate = 0;  // fraction with nht_reject and B > 1
  double mc_std_error = 0;  // binomial SE of reject_rate
  long long replications = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// splitmix64 finalizer; replication i draws its uniform from the counter
// stream mix64(seed + (i+1) * golden-ratio gamma), so substreams are
// independent of sharding and runs are bit-identical at any thread count.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// 53-bit uniform strictly inside (0,1); endpoints are unreachable so the
// normal quantile below is always finite.
inline double uniform_open01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace detail

// Samples at the sufficient-statistic level: xbar ~ N(theta_true, sigma^2/n)
// per replication, then the z-test at confidence 1 - alpha and the
// sigma1 = sigma Bayes factor.  Counts are integers, so totals are exact and
// independent of shard boundaries.
inline McReport run_mc(const McConfig& config, unsigned threads) {
  require_finite(config.theta_true, "theta_true");
  require_finite(config.theta0, "theta0");
  require_finite(config.sigma, "sigma");
  if (!(config.sigma > 0.0)) throw std::domain_error("sigma must be > 0");
  if (config.n < 1) throw std::domain_error("n must be >= 1");
  detail::check_probability(config.alpha, "alpha");
  detail::check_probability(config.pi0, "pi0");
  if (config.replications < 1) throw std::domain_error("replications must be >= 1");
  if (threads < 1) throw std::domain_error("threads must be >= 1");

  const double se = config.sigma / std::sqrt(static_cast<double>(config.n));
  const double confidence = 1.0 - config.alpha;
  const BayesConfig prior{config.pi0, config.theta0, config.sigma};

  struct Tally {
    long long reject = 0;
    long long cover = 0;
    long long paradox = 0;
  };
  auto run_chunk = [&](long long lo, long long hi, Tally& out) {
    Tally tally;
    for (long long i = lo; i < hi; ++i) {
      const std::uint64_t h = detail::mix64(
          config.seed + (static_cast<std::uint64_t>(i) + 1) * 0x9E3779B97F4A7C15ULL);
      SampleSummary sample;
      sample.n = config.n;
      sample.mean =
          config.theta_true + normal_quantile(detail::uniform_open01(h)) * se;
      sample.sigma = config.sigma;
      const NhtResult nht = z_test(sample, config.theta0, config.alpha, confidence);
      const BhtResult bht = bayes_factor(sample, prior);
      tally.reject += nht.reject ? 1 : 0;
      tally.cover +=
          (nht.ci_lower <= config.theta0 && config.theta0 <= nht.ci_upper) ? 1 : 0;
      tally.paradox += (nht.reject && bht.log_bayes_factor > 0.0) ? 1 : 0;
    }
    out = tally;
  };

  const long long reps = config.replications;
  const long long shards = std::min<long long>(threads, reps);
  std::vector<Tally> partial(static_cast<std::size_t>(shards));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(shards - 1));
  const long long per = reps / shards;
  const long long extra = reps % shards;
  long long next = 0;
  for (long long s = 0; s < shards; ++s) {
    const long long lo = next;
    const long long hi = lo + per + (s < extra ? 1 : 0);
    next = hi;
    if (s + 1 < shards) {
      pool.emplace_back(run_chunk, lo, hi, std::ref(partial[static_cast<std::size_t>(s)]));
    } else {
      run_chunk(lo, hi, partial[static_cast<std::size_t>(s)]);
    }
  }
  for (auto& worker : pool) worker.join();

  Tally total;
  for (const Tally& t : partial) {
    total.reject += t.reject;
    total.cover += t.cover;
    total.paradox += t.paradox;
  }

  McReport report;
  report.replications = reps;
  report.seed = config.seed;
  const double denom = static_cast<double>(reps);
  report.reject_rate = static_cast<double>(total.reject) / denom;
  report.coverage_rate = static_cast<double>(total.cover) / denom;
  report.paradox_rate = static_cast<double>(total.paradox) / denom;
  report.mc_std_error =
      std::sqrt(report.reject_rate * (1.0 - report.reject_rate) / denom);
  return report;
}

inline McReport run_mc(const McConfig& config) {
  const unsigned hw = std::thread::hardware_concurrency();
  return run_mc(config, hw == 0 ? 1 : hw);
}

}  // namespace lindley
