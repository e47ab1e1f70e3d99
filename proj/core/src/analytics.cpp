#include "ironclad/analytics.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ironclad/errors.hpp"
#include "ironclad/numeric.hpp"
#include "ironclad/semi_markov.hpp"

namespace ironclad {

double adversary_weight_rate(const DerivedRates& rates) { return rates.p_a * rates.w_bar; }

double tolerance_ratio_exact(double p_h, uint64_t delta, double q, double theta) {
  const double d = static_cast<double>(delta);
  const double miss_iron = pow_one_minus(q * p_h, d);   // (1-q p_h)^delta
  const double miss = pow_one_minus(p_h, d);            // (1-p_h)^delta
  const double miss2 = pow_one_minus(p_h, 2.0 * d);     // (1-p_h)^(2 delta)
  const double bracket =
      miss2 * (q - 1.0) * (q - 1.0) + miss * q * (1.0 - q) * miss_iron + theta * q * miss_iron;
  return miss_iron / ((theta - 1.0) * q + 1.0) * bracket;
}

double tolerance_ratio_exact(const ProtocolParams& params) {
  params.validate();
  const DerivedRates r = derive_rates(params);
  return tolerance_ratio_exact(r.p_h, params.delta, params.q, params.theta);
}

double tolerance_ratio_from_alpha(const ProtocolParams& params) {
  const DerivedRates r = derive_rates(params);
  const double alpha = embedded_chain(r, params.delta).alpha;
  return alpha / (r.p_h * r.w_bar);
}

double tolerance_ratio_approx(double p_h, uint64_t delta, double q, double theta) {
  if (!(theta > 1.0)) throw std::domain_error("tolerance_ratio_approx requires theta > 1");
  if (!(q > 0.0)) throw std::domain_error("tolerance_ratio_approx requires q > 0");
  const double d = static_cast<double>(delta);
  return theta * q * pow_one_minus(q * p_h, 2.0 * d) / ((theta - 1.0) * q + 1.0);
}

double tolerance_ratio_approx(const ProtocolParams& params) {
  params.validate();
  const DerivedRates r = derive_rates(params);
  return tolerance_ratio_approx(r.p_h, params.delta, params.q, params.theta);
}

double optimal_q_closed(double theta, double p_h, uint64_t delta) {
  if (!(theta > 1.0)) throw std::domain_error("optimal_q_closed requires theta > 1");
  const double d = static_cast<double>(delta);
  const double lin = p_h * (2.0 * d + 1.0);
  const double disc = lin * lin + 8.0 * d * p_h * (theta - 1.0);
  return (-lin + std::sqrt(disc)) / (4.0 * d * p_h * (theta - 1.0));
}

OptimalQ optimal_q_numeric(double p_h, uint64_t delta, double theta) {
  const auto ratio = [&](double q) { return tolerance_ratio_exact(p_h, delta, q, theta); };

  // Coarse scan brackets the maximum, golden-section refines it.
  constexpr int kGrid = 512;
  int best = 0;
  double best_val = -1.0;
  for (int i = 1; i < kGrid; ++i) {
    const double q = static_cast<double>(i) / kGrid;
    const double v = ratio(q);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = static_cast<double>(best - 1) / kGrid;
  double hi = static_cast<double>(best + 1) / kGrid;

  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = ratio(x1), f2 = ratio(x2);
  while (b - a > 1e-7) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = ratio(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = ratio(x1);
    }
  }
  OptimalQ result;
  result.q = 0.5 * (a + b);
  result.ratio = ratio(result.q);
  if (result.q <= 1.5 / kGrid || result.q >= 1.0 - 1.5 / kGrid) {
    if (ratio(1.0 / kGrid / 8.0) >= result.ratio || ratio(1.0 - 1e-9) >= result.ratio) {
      throw BoundaryMaximizerError("tolerance ratio maximized at q boundary");
    }
  }
  return result;
}

double theta_lower_bound(double p_h, uint64_t delta, double q, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::domain_error("theta_lower_bound requires epsilon in (0,1)");
  }
  const double d = static_cast<double>(delta);
  const double q_h = (1.0 - q) * p_h;
  const double q_H = q * p_h;
  const double mean = q_h * d / (1.0 - q_H);
  const double log_eps = std::log(epsilon);
  return 2.0 * mean - log_eps + std::sqrt(log_eps * log_eps - 8.0 * mean * log_eps);
}

double theta_requirement_tail(double p_h, uint64_t delta, double q, double theta) {
  const double d = static_cast<double>(delta);
  const double q_h = (1.0 - q) * p_h;
  const double q_H = q * p_h;
  const double mean = q_h * d / (1.0 - q_H);
  if (mean <= 0.0) return 0.0;
  const double dev = theta / mean - 1.0;
  if (dev <= 0.0) return 1.0;
  return std::exp(-mean * dev * dev / (2.0 + dev));
}

double improvement_ratio(const ProtocolParams& params) {
  params.validate();
  const DerivedRates r = derive_rates(params);
  const double d = static_cast<double>(params.delta);
  const double miss_H = pow_one_minus(r.q_H, d);
  const double miss = pow_one_minus(r.p_h, d);
  const double miss2 = pow_one_minus(r.p_h, 2.0 * d);
  const double bracket = r.q_h * r.q_h * miss2 + r.q_h * r.q_H * miss * miss_H +
                         params.theta * r.p_h * r.q_H * miss_H;
  return miss_H * bracket / (r.p_h * (r.q_h + params.theta * r.q_H) * miss2);
}

double chain_growth_rate(const ProtocolParams& params) {
  params.validate();
  const DerivedRates r = derive_rates(params);
  return r.p_h * r.w_bar / (1.0 + r.p_h * static_cast<double>(params.delta));
}

double chain_quality_bound(const ProtocolParams& params, double slack) {
  params.validate();
  const DerivedRates r = derive_rates(params);
  return 1.0 - (1.0 + slack) * (r.p_a / r.p_h + r.p_a * static_cast<double>(params.delta));
}

double gamma_margin(const ProtocolParams& params) {
  const DerivedRates r = derive_rates(params);
  const double beta = adversary_weight_rate(r);
  if (beta == 0.0) return std::numeric_limits<double>::infinity();
  return chain_growth_rate(params) / beta - 1.0;
}

double min_attack_duration(const DerivedRates& rates, double gamma, double theta) {
  return theta / (gamma * (rates.q_a + theta * rates.q_A));
}

double attack_tail_bound(const DerivedRates& rates, double gamma, double theta, double horizon) {
  const double min_slots = min_attack_duration(rates, gamma, theta);
  if (!(horizon > min_slots)) {
    throw std::domain_error("attack horizon below the Wald bound on the attack duration");
  }
  const double excess = theta - horizon * gamma * (rates.q_a + theta * rates.q_A);
  return std::exp(-2.0 * excess * excess / (horizon * theta * theta));
}

double consistency_threshold_ironclad(const ThresholdQuery& query) {
  if (!(query.c > 0.0)) throw std::invalid_argument("invalid parameter 'c': must be positive");
  const double cd = query.c * static_cast<double>(query.delta);
  const auto gap = [&](double rho) {
    const double p_h = (1.0 - rho) / cd;
    return rho / (1.0 - rho) - tolerance_ratio_exact(p_h, query.delta, query.q, query.theta);
  };
  double lo = 1e-9, hi = 1.0 - 1e-9;
  double g_lo = gap(lo), g_hi = gap(hi);
  if (!(g_lo < 0.0 && g_hi > 0.0)) {
    throw NoRootError("threshold bracketing failed: gap(" + std::to_string(lo) + ")=" +
                      std::to_string(g_lo) + ", gap(" + std::to_string(hi) + ")=" +
                      std::to_string(g_hi));
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double nakamoto_threshold(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("invalid parameter 'c': must be positive");
  // 1/((1-rho) p) + delta = 1/(rho p) with p = 1/(c delta) reduces to
  // rho^2 - (1 + 2c) rho + c = 0; the root below 1/2 is the threshold.
  const double b = 1.0 + 2.0 * c;
  return (b - std::sqrt(b * b - 4.0 * c)) / 2.0;
}

double nakamoto_threshold_rate(double rho) {
  if (!(rho > 0.0 && rho < 0.5)) {
    throw std::invalid_argument("invalid parameter 'rho': inverse query needs 0 < rho < 1/2");
  }
  return 1.0 / rho - 1.0 / (1.0 - rho);
}

void tabulate_tolerance_csv(std::ostream& out, double p_h, uint64_t delta, double theta,
                            const std::vector<double>& q_grid) {
  out << "# schema=1\n";
  out << "q,tolerance_ratio,tolerance_ratio_approx\n";
  for (double q : q_grid) {
    const double exact = tolerance_ratio_exact(p_h, delta, q, theta);
    double approx = std::numeric_limits<double>::quiet_NaN();
    if (theta > 1.0 && q > 0.0) approx = tolerance_ratio_approx(p_h, delta, q, theta);
    out << q << ',' << exact << ',' << approx << '\n';
  }
}

void tabulate_threshold_csv(std::ostream& out, const std::vector<double>& c_grid, uint64_t delta,
                            double q, double theta) {
  out << "# schema=1\n";
  out << "c,rho_star_ironclad,rho_star_nakamoto\n";
  for (double c : c_grid) {
    ThresholdQuery query{c, delta, q, theta};
    out << c << ',' << consistency_threshold_ironclad(query) << ',' << nakamoto_threshold(c)
        << '\n';
  }
}

}  // namespace ironclad
