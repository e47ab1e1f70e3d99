#pragma once

#include <cstdint>
#include <vector>

#include "ironclad/params.hpp"
#include "ironclad/rng.hpp"

namespace ironclad {

// Per-slot mining outcome of one party.  The same coding is used for the
// honest stream (none/regular/iron honest block) and the adversarial one.
enum class Symbol : uint8_t {
  None = 0,
  Regular = 1,
  Iron = 2,
};

// Two independent per-slot outcome streams of equal length.  At most one
// honest and one adversarial block can occur in a slot.
struct CharacteristicString {
  std::vector<Symbol> honest;
  std::vector<Symbol> adversary;

  uint64_t length() const { return honest.size(); }
};

// Draws L i.i.d. slots: honest symbols with P(regular)=q_h, P(iron)=q_H,
// adversarial ones with (q_a, q_A).  Byte-identical across runs for a
// fixed seed.
CharacteristicString sample_string(const DerivedRates& rates, uint64_t length, uint64_t seed);

// Generates one party's stream slot by slot without materializing it.
class SampledSymbolStream {
 public:
  SampledSymbolStream(double regular_rate, double iron_rate, uint64_t length, Rng rng)
      : regular_rate_(regular_rate),
        iron_rate_(iron_rate),
        remaining_(length),
        rng_(rng) {}

  // Returns -1 at end of stream, otherwise the Symbol value.
  int next() {
    if (remaining_ == 0) return -1;
    --remaining_;
    const double u = rng_.next_u01();
    if (u < regular_rate_) return static_cast<int>(Symbol::Regular);
    if (u < regular_rate_ + iron_rate_) return static_cast<int>(Symbol::Iron);
    return static_cast<int>(Symbol::None);
  }

 private:
  double regular_rate_;
  double iron_rate_;
  uint64_t remaining_;
  Rng rng_;
};

// Fixture interchange format: 2 bits per slot per party.
std::vector<uint8_t> pack_symbols(const std::vector<Symbol>& symbols);
std::vector<Symbol> unpack_symbols(const std::vector<uint8_t>& bytes, uint64_t length);

}  // namespace ironclad
