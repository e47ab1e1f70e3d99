#include "ironclad/block_tree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ironclad {

WeightRatio WeightRatio::from_theta(double theta) {
  if (!(theta >= 1.0)) throw std::invalid_argument("invalid parameter 'theta': must be >= 1");
  for (int64_t den = 1; den <= 1000; ++den) {
    const double scaled = theta * static_cast<double>(den);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) < 1e-9 * std::max(1.0, scaled)) {
      return WeightRatio{static_cast<int64_t>(rounded), den};
    }
  }
  throw std::invalid_argument(
      "invalid parameter 'theta': needs an exact rational form with denominator <= 1000");
}

BlockTree::BlockTree(WeightRatio theta) : theta_(theta) {
  blocks_.push_back(Block{0, 0, 0, 0, true, false});
  children_.emplace_back();
}

BlockId BlockTree::add_block(BlockId parent, uint64_t label, bool honest, bool iron) {
  if (parent >= blocks_.size()) {
    throw std::invalid_argument("unknown parent block " + std::to_string(parent));
  }
  const Block& up = blocks_[parent];
  if (label <= up.label) {
    throw std::invalid_argument("label " + std::to_string(label) +
                                " not greater than parent label " + std::to_string(up.label));
  }
  Block b;
  b.parent = parent;
  b.label = label;
  b.depth = up.depth + 1;
  b.weight = up.weight + (iron ? theta_.iron_scaled() : theta_.regular_scaled());
  b.honest = honest;
  b.iron = iron;
  const BlockId id = static_cast<BlockId>(blocks_.size());
  blocks_.push_back(b);
  children_.emplace_back();
  children_[parent].push_back(id);
  return id;
}

bool BlockTree::is_ancestor(BlockId ancestor, BlockId descendant) const {
  if (blocks_[ancestor].depth > blocks_[descendant].depth) return false;
  return ancestor_at_depth(descendant, blocks_[ancestor].depth) == ancestor;
}

BlockId BlockTree::ancestor_at_depth(BlockId id, uint32_t depth) const {
  while (blocks_[id].depth > depth) id = blocks_[id].parent;
  return id;
}

namespace {

// True when `candidate` beats `incumbent` under the policy, weights equal.
bool tie_prefers(const std::vector<Block>& blocks, TieBreak policy, BlockId candidate,
                 BlockId incumbent) {
  switch (policy) {
    case TieBreak::FirstSeen:
      return false;
    case TieBreak::AdversaryFavoring:
      return !blocks[candidate].honest && blocks[incumbent].honest;
    case TieBreak::LowestId:
      return candidate < incumbent;
  }
  return false;
}

}  // namespace

Chain BlockTree::heaviest_chain(TieBreak policy) const {
  Chain chain;
  chain.policy = policy;
  BlockId best = kGenesisId;
  for (BlockId id = 1; id < blocks_.size(); ++id) {
    if (blocks_[id].weight > blocks_[best].weight) {
      best = id;
      chain.tied_with.clear();
    } else if (blocks_[id].weight == blocks_[best].weight) {
      chain.tied_with.push_back(id);
      if (tie_prefers(blocks_, policy, id, best)) std::swap(chain.tied_with.back(), best);
    }
  }
  // tied_with keeps every other leaf of maximal weight; drop stale entries
  // recorded before a strictly heavier block appeared.
  std::erase_if(chain.tied_with,
                [&](BlockId id) { return blocks_[id].weight != blocks_[best].weight; });
  chain.leaf = best;
  chain.weight_scaled = blocks_[best].weight;
  chain.length = blocks_[best].depth;
  return chain;
}

AxiomReport BlockTree::validate_delta_fork(std::span<const Symbol> honest_string,
                                           std::span<const Symbol> adversary_string,
                                           uint64_t delta) const {
  AxiomReport r;
  const auto fail = [&r](int axiom, std::string detail, BlockId a, BlockId b) {
    r.pass = false;
    r.axiom = axiom;
    r.detail = std::move(detail);
    r.witness_a = a;
    r.witness_b = b;
    return r;
  };

  // A1: honest root labeled 0 (structural; the constructor guarantees it,
  // re-checked to keep the validator self-contained).
  if (blocks_[0].label != 0 || !blocks_[0].honest) {
    return fail(1, "root must be honest with label 0", 0, 0);
  }

  // A2: labels strictly increase along edges.
  for (BlockId id = 1; id < blocks_.size(); ++id) {
    if (blocks_[id].label <= blocks_[blocks_[id].parent].label) {
      return fail(2, "label not increasing along edge", blocks_[id].parent, id);
    }
  }

  // A3: multiplicity per labeled slot against the symbol streams.
  const uint64_t len = honest_string.size();
  std::vector<uint32_t> honest_count(len + 1, 0);
  std::vector<uint32_t> adv_count(len + 1, 0);
  for (BlockId id = 1; id < blocks_.size(); ++id) {
    const Block& b = blocks_[id];
    if (b.label > len) return fail(3, "block labeled beyond string length", id, id);
    auto& count = b.honest ? honest_count : adv_count;
    if (++count[b.label] > 1) return fail(3, "duplicate block for one party in a slot", id, id);
    const Symbol sym = b.honest ? honest_string[b.label - 1] : adversary_string[b.label - 1];
    const Symbol want = b.iron ? Symbol::Iron : Symbol::Regular;
    if (sym != want) return fail(3, "block type contradicts the symbol stream", id, id);
  }
  for (uint64_t t = 1; t <= len; ++t) {
    const bool honest_mined = honest_string[t - 1] != Symbol::None;
    const bool adv_mined = adversary_string[t - 1] != Symbol::None;
    if (honest_mined && !adv_mined && honest_count[t] + adv_count[t] != 1) {
      return fail(3, "slot " + std::to_string(t) + " must hold exactly one block", 0, 0);
    }
    if (honest_mined && adv_mined && honest_count[t] + adv_count[t] < 1) {
      return fail(3, "slot " + std::to_string(t) + " must hold at least one block", 0, 0);
    }
  }

  // A4: depth monotone across the delay bound for honest blocks.
  std::vector<BlockId> honest_blocks;
  honest_blocks.reserve(blocks_.size());
  for (BlockId id = 0; id < blocks_.size(); ++id) {
    if (blocks_[id].honest) honest_blocks.push_back(id);
  }
  std::sort(honest_blocks.begin(), honest_blocks.end(),
            [&](BlockId a, BlockId b) { return blocks_[a].label < blocks_[b].label; });
  size_t tail = 0;
  uint32_t max_depth_before = 0;
  BlockId max_witness = 0;
  for (BlockId id : honest_blocks) {
    const uint64_t label = blocks_[id].label;
    while (tail < honest_blocks.size() &&
           blocks_[honest_blocks[tail]].label + delta <= label) {
      if (blocks_[honest_blocks[tail]].depth >= max_depth_before) {
        max_depth_before = blocks_[honest_blocks[tail]].depth;
        max_witness = honest_blocks[tail];
      }
      ++tail;
    }
    if (blocks_[id].depth < max_depth_before) {
      return fail(4, "honest depth decreased across the delay bound", max_witness, id);
    }
  }
  return r;
}

bool BlockTree::is_prefix(BlockId leaf_a, uint64_t time_a, BlockId leaf_b, uint64_t time_b,
                          uint64_t k) const {
  (void)time_b;
  // Truncate a's chain: drop blocks from the last k slots before time_a.
  const uint64_t cutoff = time_a >= k ? time_a - k : 0;
  BlockId a = leaf_a;
  while (a != kGenesisId && blocks_[a].label > cutoff) a = blocks_[a].parent;
  return is_ancestor(a, leaf_b);
}

uint64_t BlockTree::common_prefix_violations(std::span<const BlockId> views, uint64_t time,
                                             uint64_t k) const {
  uint64_t violations = 0;
  for (size_t i = 0; i < views.size(); ++i) {
    for (size_t j = 0; j < views.size(); ++j) {
      if (i != j && !is_prefix(views[i], time, views[j], time, k)) ++violations;
    }
  }
  return violations;
}

void BlockTree::dump_csv(std::ostream& out) const {
  out << "id,parent,label,honest,iron,weight\n";
  for (BlockId id = 0; id < blocks_.size(); ++id) {
    const Block& b = blocks_[id];
    out << id << ',' << b.parent << ',' << b.label << ',' << (b.honest ? 1 : 0) << ','
        << (b.iron ? 1 : 0) << ','
        << static_cast<double>(b.weight) / static_cast<double>(theta_.den) << '\n';
  }
}

}  // namespace ironclad
