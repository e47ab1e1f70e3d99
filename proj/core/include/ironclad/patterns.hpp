#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ironclad/charstring.hpp"
#include "ironclad/errors.hpp"
#include "ironclad/params.hpp"

namespace ironclad {

// The four decomposition units of an honest stream under delay bound delta:
//   Sigma1  regular block followed by < delta empty slots (fork-prone)
//   Sigma2  regular block followed by >= delta empty slots (convergence)
//   Sigma3  iron block with a competing iron block within delta slots
//   Sigma4  iron block alone for delta slots, then trailing empty slots
enum class PatternKind : uint8_t { Sigma1 = 0, Sigma2 = 1, Sigma3 = 2, Sigma4 = 3 };

struct Pattern {
  PatternKind kind;
  uint64_t start = 0;
  uint64_t length = 0;
  // A final pattern cut short by end of input is classified by what was
  // consumed and flagged; estimators must skip it to avoid boundary bias.
  bool truncated = false;
};

struct PatternSequence {
  std::vector<Pattern> patterns;
  uint64_t preamble = 0;      // empty slots before the first block
  uint64_t total_length = 0;  // preamble + sum of pattern lengths
};

// Occurrence probability (per slot) and expected length of each pattern.
struct PatternStats {
  std::array<double, 4> prob{};
  std::array<double, 4> exp_len{};
};

PatternStats pattern_stats(const DerivedRates& rates, uint64_t delta);

// Greedy left-to-right decomposition.  `source.next()` must yield Symbol
// values as ints and -1 at end; `emit(pattern)` receives each pattern in
// order.  Returns the preamble length.
template <class Source, class Emit>
uint64_t decompose_stream(Source&& source, uint64_t delta, Emit&& emit) {
  uint64_t pos = 0;
  int cur = source.next();
  // Preamble: empty slots before the first block.
  uint64_t preamble = 0;
  while (cur == static_cast<int>(Symbol::None)) {
    ++preamble;
    ++pos;
    cur = source.next();
  }
  while (cur >= 0) {
    Pattern pat;
    pat.start = pos;
    if (cur == static_cast<int>(Symbol::Regular)) {
      // Absorb the maximal run of empty slots.
      uint64_t zeros = 0;
      ++pos;
      cur = source.next();
      while (cur == static_cast<int>(Symbol::None)) {
        ++zeros;
        ++pos;
        cur = source.next();
      }
      pat.length = 1 + zeros;
      if (zeros >= delta) {
        pat.kind = PatternKind::Sigma2;
      } else {
        pat.kind = PatternKind::Sigma1;
        pat.truncated = (cur < 0);
      }
    } else if (cur == static_cast<int>(Symbol::Iron)) {
      // Absorb up to delta non-iron slots; an iron block inside the window
      // ends the pattern just before itself.
      uint64_t window = 0;
      bool iron_hit = false;
      ++pos;
      cur = source.next();
      while (cur >= 0 && window < delta) {
        if (cur == static_cast<int>(Symbol::Iron)) {
          iron_hit = true;
          break;
        }
        ++window;
        ++pos;
        cur = source.next();
      }
      if (iron_hit) {
        pat.kind = PatternKind::Sigma3;
        pat.length = 1 + window;
      } else if (window < delta) {
        pat.kind = PatternKind::Sigma3;
        pat.length = 1 + window;
        pat.truncated = true;
      } else {
        // Full window seen; absorb the maximal trailing run of empty slots.
        uint64_t zeros = 0;
        while (cur == static_cast<int>(Symbol::None)) {
          ++zeros;
          ++pos;
          cur = source.next();
        }
        pat.kind = PatternKind::Sigma4;
        pat.length = 1 + delta + zeros;
      }
    } else {
      throw MalformedSymbolError("symbol value " + std::to_string(cur) + " at slot " +
                                 std::to_string(pos));
    }
    emit(pat);
  }
  return preamble;
}

// Materializing convenience wrapper over a stored honest stream.
PatternSequence decompose_patterns(std::span<const Symbol> honest, uint64_t delta);

}  // namespace ironclad
