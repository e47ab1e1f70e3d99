#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ironclad/block_tree.hpp"
#include "ironclad/params.hpp"

namespace ironclad {

enum class AdversaryStrategy : uint8_t {
  None = 0,                    // adversary mines and broadcasts like an honest party
  PrivateChain = 1,            // withhold a private fork, release on catch-up
  ConvergencePrevention = 2,   // partition the miners and balance two branches
};

enum class DelayModel : uint8_t {
  WorstCase = 0,   // every broadcast arrives exactly delta slots later
  UniformUpTo = 1, // per-recipient uniform delay in [1, delta]
};

struct SimConfig {
  ProtocolParams params;   // p is the per-chain block rate
  uint32_t miners = 50;
  uint64_t horizon_blocks = 10'000;  // total blocks mined across all chains
  AdversaryStrategy strategy = AdversaryStrategy::None;
  DelayModel honest_delay = DelayModel::WorstCase;
  uint32_t chains = 1;     // parallel chain count m
  TieBreak tiebreak = TieBreak::AdversaryFavoring;
  uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

enum class EventKind : uint8_t { HonestMine = 0, AdversaryMine = 1, Deliver = 2 };

struct TraceEvent {
  uint64_t time = 0;
  EventKind kind = EventKind::HonestMine;
  uint32_t block = 0;     // per-chain block id
  int32_t actor = -1;     // miner for mines, recipient for deliveries
  uint32_t chain = 0;
};

struct TraceBlockInfo {
  uint32_t parent = 0;
  uint64_t label = 0;
  int32_t miner = -1;  // -1 for the adversary
  bool honest = false;
  bool iron = false;
  uint32_t chain = 0;
};

// Complete record of one run: enough to recompute every metric.
struct Trace {
  SimConfig config;
  // blocks[c] holds chain c's blocks, index = block id, id 0 = genesis.
  std::vector<std::vector<TraceBlockInfo>> blocks;
  std::vector<TraceEvent> events;  // in processing order
  uint64_t end_time = 0;

  void write_csv(std::ostream& out) const;
  static Trace read_csv(std::istream& in);  // throws TraceError
};

struct MetricsReport {
  double chain_quality_by_number = 1.0;
  double chain_quality_by_weight = 1.0;
  double quality_growth_by_number = 0.0;  // honest blocks per delta slots
  double quality_growth_by_weight = 0.0;  // honest weight / w_bar per delta slots
  double agreement_duration_ratio = 1.0;
  double confirmation_median = 0.0;  // in delta units, over confirmed blocks
  double confirmation_p95 = 0.0;
  uint64_t confirmed_count = 0;
  uint64_t unconfirmed_count = 0;
  double weight_growth_rate = 0.0;  // chain weight per slot
  double qtilde = 0.0;              // iron fraction of the final heaviest chain
  std::vector<std::pair<uint64_t, uint64_t>> consistency_violations;  // (k, count)
  bool consistency_broken = false;
  uint64_t total_blocks = 0;
  uint64_t end_time = 0;

  static std::string csv_header();
  std::string csv_row(const SimConfig& config) const;
};

struct ParallelMetrics {
  std::vector<MetricsReport> per_chain;
  MetricsReport aggregate;
};

// Event-driven execution; deterministic for a fixed config and seed.
Trace run_simulation_trace(const SimConfig& config);

// run + analyze, single chain or m = 1.
MetricsReport run_simulation(const SimConfig& config);

// m >= 1 chains; per-chain reports plus the shared-confirmation aggregate.
ParallelMetrics run_parallel(const SimConfig& config);

// Post-hoc analyzer; also usable on stored traces.
ParallelMetrics compute_metrics(const Trace& trace);

// Iron fraction among the blocks of the final heaviest chain.
// Throws std::logic_error when the final chain is empty.
double estimate_qtilde(const Trace& trace);

}  // namespace ironclad
