#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ironclad {

// Competition between the heaviest honest chain and a private adversarial
// fork, tracked as (regular-block lead X, iron-block lead Y).  One step per
// block produced by either side; the attack is abandoned once the weight
// lead X + theta Y reaches the give-up threshold.
struct WalkConfig {
  double q = 0.0;        // adversary iron probability
  double q_tilde = 0.0;  // iron fraction along the honest heaviest chain
  double gamma = 0.5;    // honest growth margin, g = (1+gamma) beta
  double theta = 1.0;
  double threshold = 2.0;  // give-up weight lead
  uint64_t runs = 1'000'000;
  uint64_t seed = 0;
  uint64_t step_cap = 100'000'000;  // runaway-walk watchdog, per run
  bool normalize = true;            // renormalize the four step probabilities
  unsigned workers = 1;

  void validate() const;  // throws std::invalid_argument naming the field
};

// The four step probabilities in the order
// (X+1, X-1, Y+1, Y-1): honest regular, adversarial regular, honest iron,
// adversarial iron.
std::array<double, 4> step_distribution(const WalkConfig& config);

struct WalkOutcome {
  std::vector<uint64_t> histogram;  // fork length -> count
  uint64_t runs = 0;
  uint64_t censored = 0;  // runs stopped by the step cap, kept separately
  double mean = 0.0;
  double p95 = 0.0;

  // P(fork length >= len); zero beyond the observed support.
  double tail(uint64_t len) const;
};

// Monte Carlo over `runs` independent walks.  Run i draws from a substream
// keyed by (seed, i), so results do not depend on the worker count.
WalkOutcome run_walks(const WalkConfig& config);

struct TailCrossover {
  double length = 0.0;
  double probability = 0.0;
};

// First point where tail_b overtakes tail_a (log-linear interpolation
// between integer lengths).  Equal tails at the first bin count as an
// immediate crossover.  Throws InsufficientSamplesError when a tail runs
// out of mass before any crossing, and NoRootError when the tails never
// cross within the common support.
TailCrossover tail_crossover(const WalkOutcome& a, const WalkOutcome& b);

// CSV emitters: histogram rows `length,count,probability,tail` and a
// one-row summary `theta,q,q_tilde,gamma,threshold,runs,mean,p95`.
void write_histogram_csv(std::ostream& out, const WalkOutcome& outcome);
void write_walk_summary_csv(std::ostream& out, const WalkConfig& config,
                            const WalkOutcome& outcome);

}  // namespace ironclad
