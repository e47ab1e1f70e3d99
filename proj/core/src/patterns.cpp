#include "ironclad/patterns.hpp"

#include "ironclad/numeric.hpp"

namespace ironclad {

PatternStats pattern_stats(const DerivedRates& rates, uint64_t delta) {
  const double d = static_cast<double>(delta);
  const double ph = rates.p_h;
  const double qh = rates.q_h;
  const double qH = rates.q_H;

  const double miss_h = pow_one_minus(ph, d);        // (1-p_h)^delta
  const double hit_h = one_minus_pow_one_minus(ph, d);
  const double miss_H = pow_one_minus(qH, d);        // (1-q_H)^delta
  const double hit_H = one_minus_pow_one_minus(qH, d);

  PatternStats s;
  s.prob[0] = qh * hit_h;
  s.prob[1] = qh * miss_h;
  s.prob[2] = qH * hit_H;
  s.prob[3] = qH * miss_H;

  s.exp_len[0] = hit_h > 0.0 ? 1.0 / ph - d * miss_h / hit_h : 1.0;
  s.exp_len[1] = 1.0 / ph + d;
  s.exp_len[2] = hit_H > 0.0 ? 1.0 / qH - d * miss_H / hit_H : 1.0;
  s.exp_len[3] = 1.0 / ph + d;
  return s;
}

namespace {

class SpanSource {
 public:
  explicit SpanSource(std::span<const Symbol> symbols) : symbols_(symbols) {}
  int next() {
    if (pos_ >= symbols_.size()) return -1;
    return static_cast<int>(symbols_[pos_++]);
  }

 private:
  std::span<const Symbol> symbols_;
  size_t pos_ = 0;
};

}  // namespace

PatternSequence decompose_patterns(std::span<const Symbol> honest, uint64_t delta) {
  PatternSequence seq;
  seq.total_length = honest.size();
  seq.preamble = decompose_stream(SpanSource(honest), delta,
                                  [&seq](const Pattern& p) { seq.patterns.push_back(p); });
  return seq;
}

}  // namespace ironclad
