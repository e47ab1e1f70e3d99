#include "ironclad/charstring.hpp"

namespace ironclad {

CharacteristicString sample_string(const DerivedRates& rates, uint64_t length, uint64_t seed) {
  CharacteristicString s;
  s.honest.resize(length);
  s.adversary.resize(length);
  Rng rng(seed);
  // Fixed draw order: honest symbol first, then adversarial, one slot at a
  // time.  Changing this order breaks seed reproducibility.
  const double honest_total = rates.q_h + rates.q_H;
  const double adv_total = rates.q_a + rates.q_A;
  for (uint64_t i = 0; i < length; ++i) {
    double u = rng.next_u01();
    s.honest[i] = u < rates.q_h        ? Symbol::Regular
                  : u < honest_total   ? Symbol::Iron
                                       : Symbol::None;
    u = rng.next_u01();
    s.adversary[i] = u < rates.q_a      ? Symbol::Regular
                     : u < adv_total    ? Symbol::Iron
                                        : Symbol::None;
  }
  return s;
}

std::vector<uint8_t> pack_symbols(const std::vector<Symbol>& symbols) {
  std::vector<uint8_t> bytes((symbols.size() + 3) / 4, 0);
  for (size_t i = 0; i < symbols.size(); ++i) {
    bytes[i / 4] |= static_cast<uint8_t>(symbols[i]) << ((i % 4) * 2);
  }
  return bytes;
}

std::vector<Symbol> unpack_symbols(const std::vector<uint8_t>& bytes, uint64_t length) {
  std::vector<Symbol> symbols(length);
  for (uint64_t i = 0; i < length; ++i) {
    symbols[i] = static_cast<Symbol>((bytes[i / 4] >> ((i % 4) * 2)) & 0x3);
  }
  return symbols;
}

}  // namespace ironclad
