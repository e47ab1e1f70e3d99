#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "ironclad/charstring.hpp"
#include "ironclad/params.hpp"
#include "ironclad/patterns.hpp"

namespace ironclad {

// Embedded chain over the tracking states
//   S0  agreement: the last convergence opportunity stands
//   S1  regular-led fork in flight
//   S2  iron-led fork in flight
// with per-edge expected slot counts and the long-run consensus weight
// rate alpha (weight of convergence opportunities per slot).
struct SemiMarkovModel {
  std::array<std::array<double, 3>, 3> P{};   // embedded transition matrix
  std::array<std::array<double, 3>, 3> len{}; // expected edge lengths l_ij (slots)
  std::array<double, 3> pi{};                 // stationary distribution
  std::array<double, 3> mu{};                 // mean sojourn per state (slots)
  double alpha = 0.0;
  PatternStats stats;
};

// Throws std::domain_error when p_h == 0 (no honest mining, chain degenerate).
SemiMarkovModel embedded_chain(const DerivedRates& rates, uint64_t delta);

// Convenience accessor for the consensus weight rate.
double consensus_rate_alpha(const ProtocolParams& params);

// Streaming estimator of alpha over one honest stream.  Decomposes the
// stream, advances the tracking state machine and accumulates convergence
// weight:
//   S0 --Sigma2--> S0 counts 1, except immediately after an S2 episode
//   was resolved (that regular convergence is absorbed by the resolution;
//   dropping it is what the closed form's correction factor encodes),
//   S0/S1 --Sigma4--> S0 counts theta,
//   patterns flagged truncated count nothing.
class AlphaEstimator {
 public:
  explicit AlphaEstimator(double theta) : theta_(theta) {}

  void consume(const Pattern& p);
  // alpha_L for a stream of `length` slots.
  double estimate(uint64_t length) const { return weight_ / static_cast<double>(length); }

 private:
  double theta_;
  double weight_ = 0.0;
  int state_ = 0;
  bool after_iron_resolution_ = false;
};

double empirical_alpha(std::span<const Symbol> honest, const ProtocolParams& params);

// Same estimator over a freshly sampled stream of `length` slots, without
// materializing it.
double empirical_alpha_sampled(const ProtocolParams& params, uint64_t length, uint64_t seed);

}  // namespace ironclad
