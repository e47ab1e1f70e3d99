#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ironclad/params.hpp"

namespace ironclad {

// Adversarial expected weight production rate beta = p_a * w_bar.
// Consistency requires beta < alpha.
double adversary_weight_rate(const DerivedRates& rates);

// Tolerance ratio A: the maximal p_a/p_h compatible with consistency.
// Closed form in (p_h, delta, q, theta).
double tolerance_ratio_exact(double p_h, uint64_t delta, double q, double theta);
double tolerance_ratio_exact(const ProtocolParams& params);

// Same quantity through the semi-Markov route, alpha / (p_h * w_bar).
double tolerance_ratio_from_alpha(const ProtocolParams& params);

// Lower-bound approximation, valid for theta > 1 and q > 0.
double tolerance_ratio_approx(double p_h, uint64_t delta, double q, double theta);
double tolerance_ratio_approx(const ProtocolParams& params);

// Unique maximizer of the approximate tolerance ratio; root in (0,1) of
// 2 delta p_h (theta-1) q^2 + (2 delta + 1) p_h q - 1 = 0.
// Throws std::domain_error for theta <= 1.
double optimal_q_closed(double theta, double p_h, uint64_t delta);

struct OptimalQ {
  double q = 0.0;
  double ratio = 0.0;  // tolerance ratio at the maximizer
};

// Argmax of the exact tolerance ratio over q in (0,1): coarse grid plus
// golden-section refinement to 1e-5 in q.  Throws BoundaryMaximizerError
// if the maximum sits on a boundary.
OptimalQ optimal_q_numeric(double p_h, uint64_t delta, double theta);

// Lower confidence bound for the iron weight so that an iron block beats
// the regular blocks competing inside its delay window, at significance
// epsilon.  Throws std::domain_error for epsilon outside (0,1).
double theta_lower_bound(double p_h, uint64_t delta, double q, double epsilon);

// Tail probability that the competing regular blocks outweigh theta.
double theta_requirement_tail(double p_h, uint64_t delta, double q, double theta);

// Ratio of the weighted tolerance ratio to the unweighted (q = 0) one.
double improvement_ratio(const ProtocolParams& params);

// Worst-case chain weight growth rate g = p_h w_bar / (1 + p_h delta).
double chain_growth_rate(const ProtocolParams& params);

// Honest weight fraction lower bound f = 1 - (1+slack)(p_a/p_h + p_a delta).
double chain_quality_bound(const ProtocolParams& params, double slack);

// Relative honest growth margin gamma with g = (1+gamma) beta.
// Returns +infinity when p_a == 0.
double gamma_margin(const ProtocolParams& params);

// Upper bound on the probability that a private fork started S slots ago
// still outweighs the public chain minus theta.  Valid only past the Wald
// lower bound on the attack duration; throws std::domain_error below it.
double attack_tail_bound(const DerivedRates& rates, double gamma, double theta, double horizon);

// Wald lower bound on the expected attack duration, theta/(gamma(q_a+theta q_A)).
double min_attack_duration(const DerivedRates& rates, double gamma, double theta);

// Consistency threshold query on the normalized blocktime axis
// c = 1/(p delta).
struct ThresholdQuery {
  double c = 1.0;
  uint64_t delta = 1;
  double q = 0.0;
  double theta = 1.0;
};

// Unique rho in (0,1) with rho/(1-rho) = A(p_h=(1-rho)/(c delta), ...),
// bisected to 1e-6.  Throws NoRootError if bracketing fails.
double consistency_threshold_ironclad(const ThresholdQuery& query);

// Unweighted threshold: root of 1/p_h + delta = 1/p_a at p = 1/(c delta).
double nakamoto_threshold(double c);

// Inverse query: the block rate p*delta at which a fraction rho sits
// exactly on the unweighted threshold.
double nakamoto_threshold_rate(double rho);

// CSV emitters (header row + one row per grid point).
void tabulate_tolerance_csv(std::ostream& out, double p_h, uint64_t delta, double theta,
                            const std::vector<double>& q_grid);
void tabulate_threshold_csv(std::ostream& out, const std::vector<double>& c_grid,
                            uint64_t delta, double q, double theta);

}  // namespace ironclad
