#pragma once

// Practical-significance machinery: acceptance ranges for the parameter,
// the CI-overlap decision rule, and assumption-uncertainty p-value inflation.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lindley/freq.hpp"
#include "lindley/numerics.hpp"

namespace lindley {

enum class RangeProvenance { relative_delta, absolute };

// Closed interval of practically-equivalent parameter values.
struct PracticalRange {
  double lower = 0;
  double upper = 0;
  RangeProvenance provenance = RangeProvenance::absolute;
  double delta = 0;   // set when provenance == relative_delta
  double theta0 = 0;  // set when provenance == relative_delta
};

enum class Decision { accept_h0, reject_h0 };

struct AdjustedDecision {
  double ci_lower = 0;
  double ci_upper = 0;
  PracticalRange range;
  bool overlap = false;
  bool estimate_inside_range = false;
  Decision decision = Decision::reject_h0;
  double boundary_critical_t = 0;  // t the range boundary would produce
  bool overridden = false;         // decision contradicts the plain NHT verdict
};

struct InflationInput {
  double p_observed = 0;        // p_o
  double prob_assumptions = 1;  // P(R), probability all assumptions hold
};

// [(1-delta) theta0, (1+delta) theta0], endpoint-ordered for negative theta0.
inline PracticalRange make_range_relative(double delta, double theta0) {
  require_finite(delta, "delta");
  require_finite(theta0, "theta0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("delta must lie strictly in (0,1)");
  }
  if (theta0 == 0.0) {
    throw std::domain_error(
        "relative range around theta0 = 0 is degenerate; use absolute bounds");
  }
  PracticalRange r;
  r.provenance = RangeProvenance::relative_delta;
  r.delta = delta;
  r.theta0 = theta0;
  r.lower = std::min((1.0 - delta) * theta0, (1.0 + delta) * theta0);
  r.upper = std::max((1.0 - delta) * theta0, (1.0 + delta) * theta0);
  return r;
}

inline PracticalRange make_range_absolute(double lower, double upper) {
  require_finite(lower, "lower");
  require_finite(upper, "upper");
  if (lower > upper) throw std::domain_error("range lower must be <= upper");
  PracticalRange r;
  r.provenance = RangeProvenance::absolute;
  r.lower = lower;
  r.upper = upper;
  return r;
}

// Accept H0 iff the confidence interval and the acceptance range intersect
// (closed intervals: touching counts).  The plain NHT verdict is not altered,
// only contradicted via the overridden flag; boundary_critical_t reports the
// t statistic the farther range boundary would have produced.
inline AdjustedDecision adjusted_decision(const NhtResult& nht,
                                          const PracticalRange& range) {
  if (!(nht.ci_lower <= nht.ci_upper) || !(nht.std_error > 0.0)) {
    throw std::domain_error("nht result does not carry a valid CI");
  }
  AdjustedDecision d;
  d.ci_lower = nht.ci_lower;
  d.ci_upper = nht.ci_upper;
  d.range = range;
  d.overlap = nht.ci_lower <= range.upper && range.lower <= nht.ci_upper;
  d.estimate_inside_range =
      range.lower <= nht.estimate && nht.estimate <= range.upper;
  d.decision = d.overlap ? Decision::accept_h0 : Decision::reject_h0;
  d.boundary_critical_t = std::max(std::fabs(range.lower - nht.theta0),
                                   std::fabs(range.upper - nht.theta0)) /
                          nht.std_error;
  d.overridden = (d.decision == Decision::accept_h0) == nht.reject;
  return d;
}

// p = min(1, p_o / P(R)): the observed p-value diluted by the probability
// that the modeling and sampling assumptions hold.  Never deflates.
inline double inflate_p(const InflationInput& input) {
  require_finite(input.p_observed, "p_observed");
  require_finite(input.prob_assumptions, "prob_assumptions");
  if (!(input.p_observed >= 0.0 && input.p_observed <= 1.0)) {
    throw std::domain_error("p_observed must lie in [0,1]");
  }
  if (!(input.prob_assumptions > 0.0 && input.prob_assumptions <= 1.0)) {
    throw std::domain_error("prob_assumptions must lie in (0,1]");
  }
  return std::min(1.0, input.p_observed / input.prob_assumptions);
}

}  // namespace lindley
