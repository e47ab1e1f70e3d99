#include "ironclad/semi_markov.hpp"

#include <stdexcept>

#include "ironclad/numeric.hpp"

namespace ironclad {

SemiMarkovModel embedded_chain(const DerivedRates& rates, uint64_t delta) {
  if (!(rates.p_h > 0.0)) {
    throw std::domain_error("degenerate parameters: honest rate p_h must be positive");
  }
  SemiMarkovModel m;
  m.stats = pattern_stats(rates, delta);
  const auto& prob = m.stats.prob;
  const auto& len = m.stats.exp_len;

  // Pattern-type shares conditioned on a pattern starting: prob sums to p_h.
  std::array<double, 4> s{};
  for (int i = 0; i < 4; ++i) s[i] = prob[i] / rates.p_h;

  const double d = static_cast<double>(delta);
  const double miss_H = pow_one_minus(rates.q_H, d);

  // From S0 and S1 any pattern may follow; from S2 only iron-led patterns
  // can (the pattern grammar forces it), split by whether a second iron
  // block lands inside the delay window.
  m.P[0] = {s[1] + s[3], s[0], s[2]};
  m.P[1] = m.P[0];
  m.P[2] = {miss_H, 0.0, 1.0 - miss_H};

  const double conv = prob[1] + prob[3];
  const double l_conv = conv > 0.0 ? (prob[1] * len[1] + prob[3] * len[3]) / conv : 0.0;
  m.len[0] = {l_conv, len[0], len[2]};
  m.len[1] = m.len[0];
  m.len[2] = {len[3], 0.0, len[2]};

  // Stationary distribution, closed form.
  const double z = rates.q_H + rates.q_h * miss_H;
  m.pi[0] = (rates.q_H * miss_H + rates.q_h * miss_H * pow_one_minus(rates.p_h, d)) / z;
  m.pi[1] = (rates.q_h * miss_H * one_minus_pow_one_minus(rates.p_h, d)) / z;
  m.pi[2] = rates.q_H * one_minus_pow_one_minus(rates.q_H, d) / z;

  for (int i = 0; i < 3; ++i) {
    m.mu[i] = 0.0;
    for (int j = 0; j < 3; ++j) m.mu[i] += m.P[i][j] * m.len[i][j];
  }

  const double slots_per_step = m.pi[0] * m.mu[0] + m.pi[1] * m.mu[1] + m.pi[2] * m.mu[2];
  const double into_s0 = m.pi[0] * m.P[0][0] + m.pi[1] * m.P[1][0] + m.pi[2] * m.P[2][0];
  const double denom = conv * slots_per_step;

  // Recover theta from w_bar = 1 - q + q*theta; irrelevant when q == 0
  // because the iron-led share is zero there.
  double th = 1.0;
  if (rates.q_H > 0.0) {
    const double q = rates.q_H / rates.p_h;
    th = (rates.w_bar - (1.0 - q)) / q;
  }

  // Long-run weight rate of convergence opportunities.  The first term is
  // the regular-led share, discounted by the fraction of S0 entries that
  // resolve an iron fork; the second is the iron-led share at weight theta.
  double alpha = 0.0;
  if (denom > 0.0) {
    alpha = m.pi[0] * m.P[0][0] * prob[1] / denom;
    if (into_s0 > 0.0) alpha *= 1.0 - m.pi[2] * m.P[2][0] / into_s0;
    alpha += th * (m.pi[0] * m.P[0][0] + m.pi[1] * m.P[1][0]) * prob[3] / denom;
  }
  m.alpha = alpha;
  return m;
}

double consensus_rate_alpha(const ProtocolParams& params) {
  return embedded_chain(derive_rates(params), params.delta).alpha;
}

void AlphaEstimator::consume(const Pattern& p) {
  if (p.truncated) return;
  if (state_ == 0 || state_ == 1) {
    const int prev = state_;
    switch (p.kind) {
      case PatternKind::Sigma1:
        state_ = 1;
        break;
      case PatternKind::Sigma2:
        if (prev == 0 && !after_iron_resolution_) weight_ += 1.0;
        state_ = 0;
        break;
      case PatternKind::Sigma3:
        state_ = 2;
        break;
      case PatternKind::Sigma4:
        weight_ += theta_;
        state_ = 0;
        break;
    }
    after_iron_resolution_ = false;
  } else {
    // In an iron fork, regular-led patterns cannot occur mid-stream and are
    // state-preserving no-ops if fed anyway.
    if (p.kind == PatternKind::Sigma3) {
      // iron fork continues
    } else if (p.kind == PatternKind::Sigma4) {
      state_ = 0;
      after_iron_resolution_ = true;
    }
  }
}

namespace {

struct SpanSource {
  std::span<const Symbol> symbols;
  size_t pos = 0;
  int next() {
    if (pos >= symbols.size()) return -1;
    return static_cast<int>(symbols[pos++]);
  }
};

}  // namespace

double empirical_alpha(std::span<const Symbol> honest, const ProtocolParams& params) {
  params.validate();
  AlphaEstimator est(params.theta);
  decompose_stream(SpanSource{honest}, params.delta,
                   [&est](const Pattern& p) { est.consume(p); });
  return est.estimate(honest.size());
}

double empirical_alpha_sampled(const ProtocolParams& params, uint64_t length, uint64_t seed) {
  const DerivedRates rates = derive_rates(params);
  SampledSymbolStream stream(rates.q_h, rates.q_H, length, Rng(seed));
  AlphaEstimator est(params.theta);
  decompose_stream(stream, params.delta, [&est](const Pattern& p) { est.consume(p); });
  return est.estimate(length);
}

}  // namespace ironclad
