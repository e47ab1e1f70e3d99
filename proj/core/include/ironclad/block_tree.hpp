#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ironclad/charstring.hpp"

namespace ironclad {

using BlockId = uint32_t;
inline constexpr BlockId kGenesisId = 0;

// Iron weight as an exact rational with denominator <= 1000, so chain
// weights accumulate as integers and weight ties are well defined.
struct WeightRatio {
  int64_t num = 1;  // iron block weight numerator
  int64_t den = 1;

  // Throws std::invalid_argument if theta has no exact small-denominator
  // representation (within 1e-9) or theta < 1.
  static WeightRatio from_theta(double theta);

  int64_t regular_scaled() const { return den; }
  int64_t iron_scaled() const { return num; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct Block {
  BlockId parent = 0;
  uint64_t label = 0;  // slot of creation
  uint32_t depth = 0;  // edges from root
  int64_t weight = 0;  // cached root-path weight, scaled by WeightRatio::den
  bool honest = true;
  bool iron = false;
};

enum class TieBreak : uint8_t { FirstSeen = 0, AdversaryFavoring = 1, LowestId = 2 };

struct Chain {
  BlockId leaf = kGenesisId;
  int64_t weight_scaled = 0;
  uint32_t length = 0;  // blocks excluding the root
  TieBreak policy = TieBreak::FirstSeen;
  std::vector<BlockId> tied_with;  // other maximal-weight leaves, if any
};

struct AxiomReport {
  bool pass = true;
  int axiom = 0;  // 1..4 when failed
  std::string detail;
  BlockId witness_a = 0;
  BlockId witness_b = 0;
};

// Labeled weighted block tree.  Single writer; concurrent reads are safe
// between mutations.
class BlockTree {
 public:
  explicit BlockTree(WeightRatio theta);

  // Root is honest with label 0 and weight 0 by convention.
  BlockId add_block(BlockId parent, uint64_t label, bool honest, bool iron);

  const Block& block(BlockId id) const { return blocks_[id]; }
  size_t size() const { return blocks_.size(); }
  WeightRatio theta() const { return theta_; }
  std::span<const BlockId> children(BlockId id) const { return children_[id]; }

  bool is_ancestor(BlockId ancestor, BlockId descendant) const;
  // Ancestor of `id` at the given depth (depth 0 is the root).
  BlockId ancestor_at_depth(BlockId id, uint32_t depth) const;

  Chain heaviest_chain(TieBreak policy) const;

  // Axioms for the delay-bounded fork model:
  //   A1 honest root labeled 0
  //   A2 labels strictly increase along edges
  //   A3 block multiplicity per slot matches the two symbol streams
  //   A4 honest depths are monotone across a delay bound
  AxiomReport validate_delta_fork(std::span<const Symbol> honest_string,
                                  std::span<const Symbol> adversary_string,
                                  uint64_t delta) const;

  // Prefix relation: chain of `leaf_a` frozen at time_a, truncated by the
  // last k slots, is an ancestor path of the chain of `leaf_b` at time_b.
  bool is_prefix(BlockId leaf_a, uint64_t time_a, BlockId leaf_b, uint64_t time_b,
                 uint64_t k) const;

  // Pairwise consistency violations among per-party views at a common time.
  uint64_t common_prefix_violations(std::span<const BlockId> views, uint64_t time,
                                    uint64_t k) const;

  // One line per block: id,parent,label,honest,iron,weight.
  void dump_csv(std::ostream& out) const;

 private:
  WeightRatio theta_;
  std::vector<Block> blocks_;
  std::vector<std::vector<BlockId>> children_;
};

}  // namespace ironclad
