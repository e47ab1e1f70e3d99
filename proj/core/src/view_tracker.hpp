#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ironclad/block_tree.hpp"

namespace ironclad::detail {

struct TipChange {
  uint64_t time;
  uint32_t miner;
  BlockId tip;
};

// Per-miner adopted tips for one chain.  A delivered block carries its
// ancestry (a receiver fetches unknown parents as part of the exchange), so
// integration walks the chain top-down.  Both the live engine and the trace
// replay run this exact logic, which is what makes post-hoc metrics
// faithful to the decisions taken during the run.
//
// Adoption switches only to a strictly heavier chain; on equal weight a
// party keeps what it holds.  Tie policies apply to the analytical
// heaviest-chain queries and metrics, not to view dynamics.
class ViewTracker {
 public:
  ViewTracker(const BlockTree* tree, uint32_t miners)
      : tree_(tree), tips_(miners, kGenesisId), known_(miners) {
    for (auto& k : known_) k.assign(1, 1);  // genesis
    distinct_[kGenesisId] = miners;
  }

  BlockId tip(uint32_t miner) const { return tips_[miner]; }
  bool all_agree() const { return distinct_.size() == 1; }
  const std::vector<TipChange>& tip_log() const { return tip_log_; }
  const std::vector<BlockId>& tips() const { return tips_; }
  bool seen_by_honest(BlockId id) const {
    return id < seen_.size() && seen_[id] != 0;
  }

  // The mining miner integrates its own block immediately.
  void self_mine(uint64_t time, uint32_t miner, BlockId id) { integrate(time, miner, id); }

  void deliver(uint64_t time, uint32_t miner, BlockId id) {
    auto& known = known_[miner];
    if (id < known.size() && known[id]) return;
    // Pull in unknown ancestors first, oldest to newest.
    std::vector<BlockId> lineage{id};
    BlockId cur = tree_->block(id).parent;
    while (cur >= known.size() || !known[cur]) {
      lineage.push_back(cur);
      cur = tree_->block(cur).parent;
    }
    for (auto it = lineage.rbegin(); it != lineage.rend(); ++it) {
      integrate(time, miner, *it);
    }
  }

 private:
  void integrate(uint64_t time, uint32_t miner, BlockId id) {
    auto& known = known_[miner];
    if (known.size() <= id) known.resize(id + 1, 0);
    if (known[id]) return;
    known[id] = 1;
    if (seen_.size() <= id) seen_.resize(id + 1, 0);
    seen_[id] = 1;

    const Block& b = tree_->block(id);
    const Block& cur = tree_->block(tips_[miner]);
    const bool adopt = b.weight > cur.weight;
    if (adopt) {
      if (--distinct_[tips_[miner]] == 0) distinct_.erase(tips_[miner]);
      tips_[miner] = id;
      ++distinct_[id];
      tip_log_.push_back({time, miner, id});
    }
  }

  const BlockTree* tree_;
  std::vector<BlockId> tips_;
  std::vector<std::vector<char>> known_;
  std::vector<char> seen_;  // integrated into at least one honest view
  std::unordered_map<BlockId, uint32_t> distinct_;
  std::vector<TipChange> tip_log_;
};

}  // namespace ironclad::detail
