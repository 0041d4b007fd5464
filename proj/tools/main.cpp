// Command-line surface for the point-null testing toolkit.  Subcommands:
//   nht       frequentist z-test / binomial proportion test
//   bht       spike-and-slab Bayes factor and posterior
//   adjust    acceptance-range overlap decision on top of nht
//   inflate   assumption-uncertainty p-value inflation
//   sweep     fixed-t sweep over n (Jeffreys-Lindley regime table)
//   simulate  seeded Monte Carlo calibration
// Decisions are payload, never exit codes: 0 = ran, 2 = usage/contract
// error, 1 = internal numerical failure.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lindley/lindley.hpp"

namespace {

struct FormatFlags {
  std::string format = "json";
  int precision = 10;

  lindley::OutputFormat to_output_format() const {
    lindley::OutputFormat fmt;
    fmt.kind = format == "csv" ? lindley::OutputKind::csv : lindley::OutputKind::json;
    fmt.precision = precision;
    lindley::validate(fmt);
    return fmt;
  }
};

void add_format_flags(CLI::App* cmd, FormatFlags* flags) {
  cmd->add_option("--format", flags->format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--precision", flags->precision, "Significant digits [6,17]")
      ->capture_default_str();
}

lindley::SeMode parse_se_mode(const std::string& name) {
  return name == "null-based" ? lindley::SeMode::null_based
                              : lindley::SeMode::estimate_based;
}

// Geometric grid from n_start to n_end; always lands exactly on n_end, and
// factor 1 degrades to unit steps.
std::vector<long long> geometric_grid(long long n_start, long long n_end,
                                      double factor) {
  if (n_start < 1) throw std::domain_error("n-start must be >= 1");
  if (n_start >= n_end) throw std::domain_error("n-start must be < n-end");
  if (!(factor >= 1.0)) throw std::domain_error("n-factor must be >= 1");
  std::vector<long long> grid;
  long long n = n_start;
  while (n < n_end) {
    grid.push_back(n);
    if (grid.size() > 200000) {
      throw std::domain_error("sweep grid exceeds 200000 points; raise n-factor");
    }
    const double scaled = static_cast<double>(n) * factor;
    const long long next =
        scaled >= 9e18 ? n_end : static_cast<long long>(scaled);
    n = std::max(next, n + 1);
  }
  grid.push_back(n_end);
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Point-null hypothesis testing toolkit: frequentist tests, Bayes "
      "factors, fixed-t sweeps, acceptance-range decisions, p-value "
      "inflation, and Monte Carlo calibration"};
  app.require_subcommand(1);

  // ---- nht ----
  auto* nht = app.add_subcommand("nht", "Frequentist z-test or binomial test");
  long long nht_n = 0;
  double nht_mean = 0;
  long long nht_successes = 0;
  double nht_sigma = 0;
  double nht_theta0 = 0;
  double nht_alpha = 0.05;
  double nht_confidence = 0.95;
  std::string nht_se_mode = "estimate-based";
  FormatFlags nht_fmt;
  nht->add_option("--n", nht_n, "Sample size / trial count")->required();
  auto* nht_mean_opt = nht->add_option("--mean", nht_mean, "Observed sample mean");
  auto* nht_succ_opt =
      nht->add_option("--successes", nht_successes, "Binomial success count");
  auto* nht_sigma_opt =
      nht->add_option("--sigma", nht_sigma, "Known population SD (z-test)");
  nht->add_option("--theta0", nht_theta0, "Hypothesized value")->required();
  nht->add_option("--alpha", nht_alpha, "Significance level")->capture_default_str();
  nht->add_option("--confidence", nht_confidence, "CI confidence level")
      ->capture_default_str();
  nht->add_option("--se-mode", nht_se_mode, "Binomial test-statistic SE")
      ->check(CLI::IsMember({"estimate-based", "null-based"}))
      ->capture_default_str();
  add_format_flags(nht, &nht_fmt);
  nht_mean_opt->excludes(nht_succ_opt);
  nht_mean_opt->needs(nht_sigma_opt);
  nht_sigma_opt->excludes(nht_succ_opt);

  // ---- bht ----
  auto* bht = app.add_subcommand("bht", "Bayes factor and posterior for the point null");
  long long bht_n = 0;
  double bht_mean = 0;
  double bht_sigma = 0;
  double bht_theta0 = 0;
  double bht_pi0 = 0.5;
  double bht_prior_sd = 0;
  FormatFlags bht_fmt;
  bht->add_option("--n", bht_n, "Sample size")->required();
  bht->add_option("--mean", bht_mean, "Observed sample mean")->required();
  bht->add_option("--sigma", bht_sigma, "Known population SD")->required();
  bht->add_option("--theta0", bht_theta0, "Point null value")->required();
  bht->add_option("--pi0", bht_pi0, "Prior mass on H0")->capture_default_str();
  auto* bht_prior_opt =
      bht->add_option("--prior-sd", bht_prior_sd, "Slab SD (default: sigma)");
  add_format_flags(bht, &bht_fmt);

  // ---- adjust ----
  auto* adjust =
      app.add_subcommand("adjust", "Acceptance-range overlap decision on the NHT CI");
  long long adj_n = 0;
  double adj_mean = 0;
  long long adj_successes = 0;
  double adj_sigma = 0;
  double adj_theta0 = 0;
  double adj_alpha = 0.05;
  double adj_confidence = 0.95;
  std::string adj_se_mode = "estimate-based";
  double adj_delta = 0;
  double adj_range_lower = 0;
  double adj_range_upper = 0;
  FormatFlags adj_fmt;
  adjust->add_option("--n", adj_n, "Sample size / trial count")->required();
  auto* adj_mean_opt = adjust->add_option("--mean", adj_mean, "Observed sample mean");
  auto* adj_succ_opt =
      adjust->add_option("--successes", adj_successes, "Binomial success count");
  auto* adj_sigma_opt =
      adjust->add_option("--sigma", adj_sigma, "Known population SD (z-test)");
  adjust->add_option("--theta0", adj_theta0, "Hypothesized value")->required();
  adjust->add_option("--alpha", adj_alpha, "Significance level")->capture_default_str();
  adjust->add_option("--confidence", adj_confidence, "CI confidence level")
      ->capture_default_str();
  adjust->add_option("--se-mode", adj_se_mode, "Binomial test-statistic SE")
      ->check(CLI::IsMember({"estimate-based", "null-based"}))
      ->capture_default_str();
  auto* adj_delta_opt =
      adjust->add_option("--delta", adj_delta, "Relative half-width of the range");
  auto* adj_lower_opt =
      adjust->add_option("--range-lower", adj_range_lower, "Absolute range lower bound");
  auto* adj_upper_opt =
      adjust->add_option("--range-upper", adj_range_upper, "Absolute range upper bound");
  add_format_flags(adjust, &adj_fmt);
  adj_mean_opt->excludes(adj_succ_opt);
  adj_mean_opt->needs(adj_sigma_opt);
  adj_sigma_opt->excludes(adj_succ_opt);
  adj_delta_opt->excludes(adj_lower_opt);
  adj_delta_opt->excludes(adj_upper_opt);
  adj_lower_opt->needs(adj_upper_opt);
  adj_upper_opt->needs(adj_lower_opt);

  // ---- inflate ----
  auto* inflate = app.add_subcommand("inflate", "Assumption-uncertainty p-value inflation");
  double inf_p = 0;
  double inf_prob = 1;
  FormatFlags inf_fmt;
  inflate->add_option("--p-observed", inf_p, "Observed p-value")->required();
  inflate->add_option("--prob-assumptions", inf_prob, "P(all assumptions hold)")
      ->required();
  add_format_flags(inflate, &inf_fmt);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "Fixed-t sweep over n");
  double sw_t = 0;
  long long sw_n_start = 0;
  long long sw_n_end = 0;
  double sw_factor = 2.0;
  double sw_alpha = 0.05;
  double sw_pi0 = 0.5;
  double sw_threshold = 0.5;
  FormatFlags sw_fmt;
  sweep->add_option("--t", sw_t, "Fixed test statistic magnitude")->required();
  sweep->add_option("--n-start", sw_n_start, "First sample size")->required();
  sweep->add_option("--n-end", sw_n_end, "Last sample size (always included)")
      ->required();
  sweep->add_option("--n-factor", sw_factor, "Geometric grid factor (1 = unit step)")
      ->capture_default_str();
  sweep->add_option("--alpha", sw_alpha, "Significance level")->capture_default_str();
  sweep->add_option("--pi0", sw_pi0, "Prior mass on H0")->capture_default_str();
  sweep->add_option("--posterior-threshold", sw_threshold,
                    "Posterior needed to count as favoring H0")
      ->capture_default_str();
  add_format_flags(sweep, &sw_fmt);

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo calibration");
  lindley::McConfig mc;
  FormatFlags sim_fmt;
  simulate->add_option("--theta-true", mc.theta_true, "True parameter")->required();
  simulate->add_option("--theta0", mc.theta0, "Hypothesized value")->required();
  simulate->add_option("--sigma", mc.sigma, "Known population SD")->required();
  simulate->add_option("--n", mc.n, "Sample size per replication")->required();
  simulate->add_option("--alpha", mc.alpha, "Significance level")->capture_default_str();
  simulate->add_option("--pi0", mc.pi0, "Prior mass on H0")->capture_default_str();
  simulate->add_option("--reps", mc.replications, "Replication count")->required();
  simulate->add_option("--seed", mc.seed, "RNG seed")->required();
  add_format_flags(simulate, &sim_fmt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 2;
  }

  try {
    if (nht->parsed()) {
      const bool have_mean = nht_mean_opt->count() > 0;
      const bool have_succ = nht_succ_opt->count() > 0;
      if (have_mean == have_succ) {
        std::cerr << "nht: exactly one of --mean (with --sigma) or --successes "
                     "is required\n";
        return 2;
      }
      lindley::NhtResult r;
      if (have_succ) {
        r = lindley::binomial_test({nht_n, nht_successes}, nht_theta0, nht_alpha,
                                   nht_confidence, parse_se_mode(nht_se_mode));
      } else {
        r = lindley::z_test({nht_n, nht_mean, nht_sigma}, nht_theta0, nht_alpha,
                            nht_confidence);
      }
      const auto fmt = nht_fmt.to_output_format();
      std::cout << lindley::encode(lindley::to_record(r, fmt.precision), fmt);
      return 0;
    }

    if (bht->parsed()) {
      lindley::BayesConfig config;
      config.pi0 = bht_pi0;
      config.theta0 = bht_theta0;
      config.prior_sd = bht_prior_opt->count() > 0 ? bht_prior_sd : bht_sigma;
      const lindley::BhtResult r =
          lindley::posterior_h0({bht_n, bht_mean, bht_sigma}, config);
      const auto fmt = bht_fmt.to_output_format();
      std::cout << lindley::encode(lindley::to_record(r, fmt.precision), fmt);
      return 0;
    }

    if (adjust->parsed()) {
      const bool have_mean = adj_mean_opt->count() > 0;
      const bool have_succ = adj_succ_opt->count() > 0;
      if (have_mean == have_succ) {
        std::cerr << "adjust: exactly one of --mean (with --sigma) or "
                     "--successes is required\n";
        return 2;
      }
      const bool have_delta = adj_delta_opt->count() > 0;
      const bool have_range = adj_lower_opt->count() > 0;
      if (have_delta == have_range) {
        std::cerr << "adjust: exactly one of --delta or --range-lower/"
                     "--range-upper is required\n";
        return 2;
      }
      lindley::NhtResult nht_result;
      if (have_succ) {
        nht_result =
            lindley::binomial_test({adj_n, adj_successes}, adj_theta0, adj_alpha,
                                   adj_confidence, parse_se_mode(adj_se_mode));
      } else {
        nht_result = lindley::z_test({adj_n, adj_mean, adj_sigma}, adj_theta0,
                                     adj_alpha, adj_confidence);
      }
      const lindley::PracticalRange range =
          have_delta ? lindley::make_range_relative(adj_delta, adj_theta0)
                     : lindley::make_range_absolute(adj_range_lower, adj_range_upper);
      const lindley::AdjustedDecision d = lindley::adjusted_decision(nht_result, range);
      const auto fmt = adj_fmt.to_output_format();
      std::cout << lindley::encode(lindley::to_record(d, nht_result, fmt.precision),
                                   fmt);
      return 0;
    }

    if (inflate->parsed()) {
      const lindley::InflationInput input{inf_p, inf_prob};
      const double p = lindley::inflate_p(input);
      const auto fmt = inf_fmt.to_output_format();
      std::cout << lindley::encode(lindley::inflation_record(input, p, fmt.precision),
                                   fmt);
      return 0;
    }

    if (sweep->parsed()) {
      const auto grid = geometric_grid(sw_n_start, sw_n_end, sw_factor);
      const lindley::ParadoxReport report =
          lindley::sweep_fixed_t(sw_t, grid, sw_alpha, sw_pi0, sw_threshold);
      std::cout << lindley::encode_sweep(report, sw_fmt.to_output_format());
      return 0;
    }

    if (simulate->parsed()) {
      const lindley::McReport report = lindley::run_mc(mc);
      const auto fmt = sim_fmt.to_output_format();
      std::cout << lindley::encode(lindley::to_record(report, fmt.precision), fmt);
      return 0;
    }
  } catch (const lindley::quadrature_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
