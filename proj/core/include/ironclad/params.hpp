#pragma once

#include <cstdint>

namespace ironclad {

// Protocol parameter space.  Slot indices and the delay bound are 64-bit:
// realistic deployments discretize to delay bounds around 1e13 slots.
struct ProtocolParams {
  double p = 0.0;         // per-slot probability of any block, in (0,1)
  double rho = 0.0;       // adversarial fraction of mining power, in [0,1)
  uint64_t delta = 1;     // network delay bound in slots, >= 1
  double q = 0.0;         // probability a new block is iron, in [0,1]
  double theta = 1.0;     // iron block weight, >= 1

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Per-slot rates split by party and block type.
struct DerivedRates {
  double p_h = 0.0;   // honest block rate, (1-rho) p
  double p_a = 0.0;   // adversarial block rate, rho p
  double q_h = 0.0;   // honest regular rate, (1-q) p_h
  double q_H = 0.0;   // honest iron rate, q p_h
  double q_a = 0.0;   // adversarial regular rate, (1-q) p_a
  double q_A = 0.0;   // adversarial iron rate, q p_a
  double w_bar = 1.0; // expected block weight, 1 - q + q theta
};

DerivedRates derive_rates(const ProtocolParams& params);

}  // namespace ironclad
