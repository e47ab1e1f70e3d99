#include "ironclad/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ironclad {

namespace {

[[noreturn]] void reject(const char* field, const std::string& detail) {
  throw std::invalid_argument(std::string("invalid parameter '") + field + "': " + detail);
}

}  // namespace

void ProtocolParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) reject("p", "must satisfy 0 < p < 1, got " + std::to_string(p));
  if (!(rho >= 0.0 && rho < 1.0)) reject("rho", "must satisfy 0 <= rho < 1, got " + std::to_string(rho));
  if (delta < 1) reject("delta", "must be >= 1");
  if (!(q >= 0.0 && q <= 1.0)) reject("q", "must satisfy 0 <= q <= 1, got " + std::to_string(q));
  if (!(theta >= 1.0) || !std::isfinite(theta)) reject("theta", "must be >= 1, got " + std::to_string(theta));
}

DerivedRates derive_rates(const ProtocolParams& params) {
  params.validate();
  DerivedRates r;
  r.p_h = (1.0 - params.rho) * params.p;
  r.p_a = params.rho * params.p;
  // q_h is the complement of q_H rather than (1-q)p_h so that the split
  // q_h + q_H == p_h holds exactly in floating point.
  r.q_H = params.q * r.p_h;
  r.q_h = r.p_h - r.q_H;
  r.q_A = params.q * r.p_a;
  r.q_a = r.p_a - r.q_A;
  r.w_bar = 1.0 - params.q + params.q * params.theta;
  return r;
}

}  // namespace ironclad
