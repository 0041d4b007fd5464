#pragma once

// Machine-readable output: flat records rendered as JSON or CSV.  Doubles
// are rounded once, through the decimal string, so the value parsed back
// from either format is exactly the value stored in the record.

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lindley/bayes.hpp"
#include "lindley/freq.hpp"
#include "lindley/mc.hpp"
#include "lindley/paradox.hpp"
#include "lindley/practical.hpp"

namespace lindley {

enum class OutputKind { json, csv };

struct OutputFormat {
  OutputKind kind = OutputKind::json;
  int precision = 10;  // significant digits
};

inline void validate(const OutputFormat& fmt) {
  if (fmt.precision < 6 || fmt.precision > 17) {
    throw std::domain_error("precision must lie in [6, 17]");
  }
}

// Round x to `precision` significant digits via printf/strtod round-trip.
inline double round_sig(double x, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return std::strtod(buf, nullptr);
}

namespace detail {

inline const char* to_string(Decision d) {
  return d == Decision::accept_h0 ? "accept_h0" : "reject_h0";
}

inline const char* to_string(RangeProvenance p) {
  return p == RangeProvenance::relative_delta ? "relative_delta" : "absolute";
}

}  // namespace detail

inline nlohmann::ordered_json to_record(const NhtResult& r, int precision) {
  nlohmann::ordered_json j;
  j["theta0"] = round_sig(r.theta0, precision);
  j["estimate"] = round_sig(r.estimate, precision);
  j["std_error"] = round_sig(r.std_error, precision);
  j["t_stat"] = round_sig(r.t_stat, precision);
  j["p_value"] = round_sig(r.p_value, precision);
  j["ci_lower"] = round_sig(r.ci_lower, precision);
  j["ci_upper"] = round_sig(r.ci_upper, precision);
  j["confidence_level"] = round_sig(r.confidence_level, precision);
  j["reject"] = r.reject;
  j["alpha"] = round_sig(r.alpha, precision);
  return j;
}

inline nlohmann::ordered_json to_record(const BhtResult& r, int precision) {
  nlohmann::ordered_json j;
  j["bayes_factor"] = round_sig(r.bayes_factor, precision);
  j["log_bayes_factor"] = round_sig(r.log_bayes_factor, precision);
  j["posterior_h0"] = round_sig(r.posterior_h0, precision);
  j["posterior_odds"] = round_sig(r.posterior_odds, precision);
  j["prior_odds"] = round_sig(r.prior_odds, precision);
  j["pi0"] = round_sig(r.config.pi0, precision);
  j["theta0"] = round_sig(r.config.theta0, precision);
  j["prior_sd"] = round_sig(r.config.prior_sd, precision);
  j["implausible_t"] = r.implausible_t;
  return j;
}

// Adjusted-decision record; carries the NHT fields it was derived from so a
// single row documents both verdicts.
inline nlohmann::ordered_json to_record(const AdjustedDecision& d,
                                        const NhtResult& nht, int precision) {
  nlohmann::ordered_json j;
  j["theta0"] = round_sig(nht.theta0, precision);
  j["estimate"] = round_sig(nht.estimate, precision);
  j["std_error"] = round_sig(nht.std_error, precision);
  j["t_stat"] = round_sig(nht.t_stat, precision);
  j["p_value"] = round_sig(nht.p_value, precision);
  j["nht_reject"] = nht.reject;
  j["ci_lower"] = round_sig(d.ci_lower, precision);
  j["ci_upper"] = round_sig(d.ci_upper, precision);
  j["range_lower"] = round_sig(d.range.lower, precision);
  j["range_upper"] = round_sig(d.range.upper, precision);
  j["range_provenance"] = detail::to_string(d.range.provenance);
  if (d.range.provenance == RangeProvenance::relative_delta) {
    j["range_delta"] = round_sig(d.range.delta, precision);
  } else {
    j["range_delta"] = nullptr;
  }
  j["overlap"] = d.overlap;
  j["estimate_inside_range"] = d.estimate_inside_range;
  j["decision"] = detail::to_string(d.decision);
  j["overridden"] = d.overridden;
  j["boundary_critical_t"] = round_sig(d.boundary_critical_t, precision);
  return j;
}

inline nlohmann::ordered_json to_record(const McReport& r, int precision) {
  nlohmann::ordered_json j;
  j["reject_rate"] = round_sig(r.reject_rate, precision);
  j["coverage_rate"] = round_sig(r.coverage_rate, precision);
  j["paradox_rate"] = round_sig(r.paradox_rate, precision);
  j["mc_std_error"] = round_sig(r.mc_std_error, precision);
  j["replications"] = r.replications;
  j["seed"] = r.seed;
  return j;
}

inline nlohmann::ordered_json inflation_record(const InflationInput& input,
                                               double p_inflated, int precision) {
  nlohmann::ordered_json j;
  j["p_observed"] = round_sig(input.p_observed, precision);
  j["prob_assumptions"] = round_sig(input.prob_assumptions, precision);
  j["p_inflated"] = round_sig(p_inflated, precision);
  return j;
}

inline nlohmann::ordered_json to_record(const SweepRow& row, int precision) {
  nlohmann::ordered_json j;
  j["n"] = row.n;
  j["t"] = round_sig(row.t, precision);
  j["p_value"] = round_sig(row.p_value, precision);
  j["bayes_factor"] = round_sig(row.bayes_factor, precision);
  j["log_bayes_factor"] = round_sig(row.log_bayes_factor, precision);
  j["posterior_h0"] = round_sig(row.posterior_h0, precision);
  j["nht_reject"] = row.nht_reject;
  j["bht_favors_h0"] = row.bht_favors_h0;
  return j;
}

inline nlohmann::ordered_json to_record(const ParadoxReport& report, int precision) {
  nlohmann::ordered_json j;
  if (report.crossover_n) {
    j["crossover_n"] = *report.crossover_n;
  } else {
    j["crossover_n"] = nullptr;
  }
  j["limit_check"] = report.limit_check;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SweepRow& row : report.rows) rows.push_back(to_record(row, precision));
  j["rows"] = rows;
  return j;
}

namespace detail {

// CSV cell: strings raw (no field here ever contains a separator), null
// empty, numerics/bools via the JSON dump so both formats print identically.
inline std::string csv_cell(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return std::string();
  return v.dump();
}

inline std::string csv_encode_flat(const nlohmann::ordered_json& record) {
  std::string header;
  std::string row;
  for (auto it = record.begin(); it != record.end(); ++it) {
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += it.key();
    row += csv_cell(it.value());
  }
  return header + "\n" + row + "\n";
}

}  // namespace detail

// Render a flat record (every command except sweep) in the chosen format.
inline std::string encode(const nlohmann::ordered_json& record,
                          const OutputFormat& fmt) {
  validate(fmt);
  if (fmt.kind == OutputKind::json) return record.dump(2) + "\n";
  return detail::csv_encode_flat(record);
}

// Sweep table.  CSV uses the fixed header below, one line per row, and a
// trailing comment line carrying the summary.
inline constexpr const char* kSweepCsvHeader =
    "n,t,p_value,bayes_factor,log_bayes_factor,posterior_h0,nht_reject,"
    "bht_favors_h0";

inline std::string encode_sweep(const ParadoxReport& report, const OutputFormat& fmt) {
  validate(fmt);
  const nlohmann::ordered_json j = to_record(report, fmt.precision);
  if (fmt.kind == OutputKind::json) return j.dump(2) + "\n";
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const auto& row : j["rows"]) {
    bool first = true;
    for (const auto& cell : row) {
      if (!first) out += ',';
      first = false;
      out += detail::csv_cell(cell);
    }
    out += '\n';
  }
  out += "# crossover_n=";
  out += report.crossover_n ? std::to_string(*report.crossover_n) : "none";
  out += report.limit_check ? " limit_check=true" : " limit_check=false";
  out += '\n';
  return out;
}

}  // namespace lindley
