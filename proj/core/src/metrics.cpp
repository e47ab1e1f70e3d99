#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ironclad/errors.hpp"
#include "ironclad/simulator.hpp"
#include "view_tracker.hpp"

namespace ironclad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ChainAnalysis {
  std::vector<BlockId> final_chain;  // depth 1..D, genesis excluded
  // Slot at which final-chain depth d became permanent in every view;
  // +inf when it never did.  Index 0 corresponds to depth 1.
  std::vector<double> stable_at;
  uint64_t honest_in_chain = 0;
  int64_t honest_weight = 0;
  int64_t total_weight = 0;
  uint64_t iron_in_chain = 0;
  uint64_t total_mined = 0;  // excluding genesis
};

double quantile(std::vector<double>& values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t rank = static_cast<size_t>(std::ceil(p * static_cast<double>(values.size())));
  return values[std::min(values.size() - 1, rank > 0 ? rank - 1 : 0)];
}

}  // namespace

ParallelMetrics compute_metrics(const Trace& trace) {
  const SimConfig& cfg = trace.config;
  const uint32_t chains = cfg.chains;
  const uint32_t miners = cfg.miners;
  if (trace.blocks.size() != chains) throw TraceError("trace chain count mismatch");
  const WeightRatio ratio = WeightRatio::from_theta(cfg.params.theta);
  const DerivedRates rates = derive_rates(cfg.params);
  const uint64_t end_time = trace.end_time;

  // Rebuild the trees, then replay every event through the same view logic
  // the engine used.
  std::vector<BlockTree> trees;
  trees.reserve(chains);
  std::vector<detail::ViewTracker> views;
  views.reserve(chains);
  for (uint32_t c = 0; c < chains; ++c) {
    trees.emplace_back(ratio);
    views.emplace_back(&trees[c], miners);
  }

  // Agreement bookkeeping: per-chain agreed time plus the window where every
  // chain agrees at once.  State flips only at events, so intervals between
  // flips accumulate lazily.
  std::vector<uint32_t> next_block(chains, 1);
  std::vector<uint64_t> chain_agree_slots(chains, 0);
  std::vector<uint64_t> chain_agree_since(chains, 0);
  uint64_t all_agree_slots = 0;
  uint64_t all_agree_since = 0;
  uint32_t agreed_chains = chains;

  for (const TraceEvent& ev : trace.events) {
    const bool was_agreed = views[ev.chain].all_agree();
    switch (ev.kind) {
      case EventKind::HonestMine:
      case EventKind::AdversaryMine: {
        auto& chain_blocks = trace.blocks[ev.chain];
        if (ev.block != next_block[ev.chain]++) throw TraceError("trace events out of order");
        const TraceBlockInfo& b = chain_blocks[ev.block];
        trees[ev.chain].add_block(b.parent, b.label, b.honest, b.iron);
        if (ev.kind == EventKind::HonestMine) {
          views[ev.chain].self_mine(ev.time, static_cast<uint32_t>(ev.actor), ev.block);
        }
        break;
      }
      case EventKind::Deliver:
        views[ev.chain].deliver(ev.time, static_cast<uint32_t>(ev.actor), ev.block);
        break;
    }
    const bool is_agreed = views[ev.chain].all_agree();
    if (was_agreed != is_agreed) {
      if (was_agreed) {
        chain_agree_slots[ev.chain] += ev.time - chain_agree_since[ev.chain];
        if (agreed_chains-- == chains) all_agree_slots += ev.time - all_agree_since;
      } else {
        chain_agree_since[ev.chain] = ev.time;
        if (++agreed_chains == chains) all_agree_since = ev.time;
      }
    }
  }
  for (uint32_t c = 0; c < chains; ++c) {
    if (views[c].all_agree()) chain_agree_slots[c] += end_time - chain_agree_since[c];
  }
  if (agreed_chains == chains) all_agree_slots += end_time - all_agree_since;

  // Per-chain analysis on the final heaviest honest-visible chain.
  std::vector<ChainAnalysis> analysis(chains);
  for (uint32_t c = 0; c < chains; ++c) {
    ChainAnalysis& a = analysis[c];
    const BlockTree& tree = trees[c];
    a.total_mined = tree.size() - 1;

    BlockId best = kGenesisId;
    for (BlockId id = 1; id < tree.size(); ++id) {
      if (!views[c].seen_by_honest(id)) continue;
      const Block& b = tree.block(id);
      const Block& cur = tree.block(best);
      if (b.weight > cur.weight ||
          (b.weight == cur.weight && cfg.tiebreak == TieBreak::AdversaryFavoring &&
           !b.honest && cur.honest)) {
        best = id;
      }
    }

    for (BlockId id = best; id != kGenesisId; id = tree.block(id).parent) {
      a.final_chain.push_back(id);
    }
    std::reverse(a.final_chain.begin(), a.final_chain.end());
    for (BlockId id : a.final_chain) {
      const Block& b = tree.block(id);
      const int64_t w = b.iron ? ratio.iron_scaled() : ratio.regular_scaled();
      a.total_weight += w;
      if (b.honest) {
        ++a.honest_in_chain;
        a.honest_weight += w;
      }
      if (b.iron) ++a.iron_in_chain;
    }

    // Divergence depth of every block: depth of its deepest ancestor on
    // the final chain.
    std::vector<uint32_t> final_depth(tree.size(), 0);
    std::vector<char> on_final(tree.size(), 0);
    on_final[kGenesisId] = 1;
    for (size_t d = 0; d < a.final_chain.size(); ++d) {
      on_final[a.final_chain[d]] = 1;
      final_depth[a.final_chain[d]] = static_cast<uint32_t>(d + 1);
    }
    std::vector<uint32_t> div(tree.size(), 0);
    for (BlockId id = 1; id < tree.size(); ++id) {
      div[id] = on_final[id] ? final_depth[id] : div[tree.block(id).parent];
    }

    // For every divergence level v, the last time any miner sat at level v;
    // the final interval of each miner pins its level to "forever".
    const uint64_t depth = a.final_chain.size();
    std::vector<double> last_at_level(depth + 2, 0.0);
    std::vector<uint32_t> prev_div(miners, 0);
    for (const auto& change : views[c].tip_log()) {
      const uint32_t m = change.miner;
      const uint32_t v = div[change.tip];
      if (v != prev_div[m]) {
        last_at_level[prev_div[m]] =
            std::max(last_at_level[prev_div[m]], static_cast<double>(change.time));
        prev_div[m] = v;
      }
    }
    for (uint32_t m = 0; m < miners; ++m) last_at_level[prev_div[m]] = kInf;

    // stable_at(d) = last moment any view sat below level d.
    a.stable_at.resize(depth);
    double running = 0.0;
    for (uint64_t d = 1; d <= depth; ++d) {
      running = std::max(running, last_at_level[d - 1]);
      a.stable_at[d - 1] = running;
    }
  }

  // Assemble reports.
  ParallelMetrics result;
  result.per_chain.resize(chains);
  const double delta = static_cast<double>(cfg.params.delta);
  const double span = static_cast<double>(end_time);

  auto fill_report = [&](MetricsReport& r, const ChainAnalysis& a,
                         const std::vector<double>& conf_times, uint64_t confirmed,
                         uint64_t unconfirmed, uint64_t agree_slots) {
    const uint64_t n = a.final_chain.size();
    r.chain_quality_by_number = n > 0 ? double(a.honest_in_chain) / double(n) : 1.0;
    r.chain_quality_by_weight =
        a.total_weight > 0 ? double(a.honest_weight) / double(a.total_weight) : 1.0;
    r.quality_growth_by_number = span > 0 ? double(a.honest_in_chain) * delta / span : 0.0;
    const double honest_weight = double(a.honest_weight) / double(ratio.den);
    r.quality_growth_by_weight =
        span > 0 ? honest_weight / rates.w_bar * delta / span : 0.0;
    r.weight_growth_rate =
        span > 0 ? double(a.total_weight) / double(ratio.den) / span : 0.0;
    r.qtilde = n > 0 ? double(a.iron_in_chain) / double(n) : 0.0;
    r.agreement_duration_ratio = span > 0 ? double(agree_slots) / span : 1.0;
    r.total_blocks = a.total_mined;
    r.end_time = end_time;
    r.confirmed_count = confirmed;
    r.unconfirmed_count = unconfirmed;
    std::vector<double> sorted(conf_times);
    r.confirmation_median = quantile(sorted, 0.5) / delta;
    r.confirmation_p95 = quantile(sorted, 0.95) / delta;
    r.consistency_broken =
        a.total_mined > 0 && double(unconfirmed) > 0.5 * double(a.total_mined);
  };

  // Aggregate confirmation: a block at depth d is confirmed once every
  // chain has a permanent depth-d prefix.
  uint64_t max_depth = 0;
  for (const auto& a : analysis) max_depth = std::max<uint64_t>(max_depth, a.stable_at.size());
  std::vector<double> all_stable(max_depth, 0.0);
  for (const auto& a : analysis) {
    for (size_t d = 0; d < max_depth; ++d) {
      const double v = d < a.stable_at.size() ? a.stable_at[d] : kInf;
      all_stable[d] = std::max(all_stable[d], v);
    }
  }

  MetricsReport aggregate;
  std::vector<double> agg_conf_times;
  uint64_t agg_confirmed = 0, agg_unconfirmed = 0;
  ChainAnalysis pooled;

  for (uint32_t c = 0; c < chains; ++c) {
    const ChainAnalysis& a = analysis[c];
    std::vector<double> conf_times;
    uint64_t confirmed = 0, unconfirmed = a.total_mined - a.final_chain.size();
    for (size_t d = 0; d < a.final_chain.size(); ++d) {
      const double at = a.stable_at[d];
      const uint64_t label = trees[c].block(a.final_chain[d]).label;
      if (std::isinf(at)) {
        ++unconfirmed;
      } else {
        ++confirmed;
        conf_times.push_back(at - static_cast<double>(label));
      }
      const double agg_at = chains > 1 ? all_stable[d] : at;
      if (std::isinf(agg_at)) {
        ++agg_unconfirmed;
      } else {
        ++agg_confirmed;
        agg_conf_times.push_back(agg_at - static_cast<double>(label));
      }
    }
    agg_unconfirmed += a.total_mined - a.final_chain.size();
    fill_report(result.per_chain[c], a, conf_times, confirmed, unconfirmed,
                chain_agree_slots[c]);

    pooled.honest_in_chain += a.honest_in_chain;
    pooled.honest_weight += a.honest_weight;
    pooled.total_weight += a.total_weight;
    pooled.iron_in_chain += a.iron_in_chain;
    pooled.total_mined += a.total_mined;
    pooled.final_chain.insert(pooled.final_chain.end(), a.final_chain.begin(),
                              a.final_chain.end());
  }
  fill_report(aggregate, pooled, agg_conf_times, agg_confirmed, agg_unconfirmed,
              all_agree_slots);
  // Pooled growth spans all chains; keep per-slot semantics per chain.
  aggregate.quality_growth_by_number /= chains;
  aggregate.quality_growth_by_weight /= chains;
  aggregate.weight_growth_rate /= chains;

  // Final-view consistency table over truncation windows k.
  for (uint64_t mult : {0ull, 1ull, 2ull, 4ull, 8ull}) {
    const uint64_t k = mult * cfg.params.delta;
    uint64_t count = 0;
    for (uint32_t c = 0; c < chains; ++c) {
      count += trees[c].common_prefix_violations(views[c].tips(), end_time, k);
    }
    aggregate.consistency_violations.emplace_back(k, count);
  }
  for (uint32_t c = 0; c < chains; ++c) {
    result.per_chain[c].consistency_violations = aggregate.consistency_violations;
  }

  result.aggregate = std::move(aggregate);
  return result;
}

double estimate_qtilde(const Trace& trace) {
  const ParallelMetrics metrics = compute_metrics(trace);
  if (metrics.aggregate.total_blocks == 0) {
    throw std::logic_error("empty chain: no blocks to estimate the iron fraction from");
  }
  return metrics.aggregate.qtilde;
}

std::string MetricsReport::csv_header() {
  return "rho,p_per_delta,q,theta,cq_num,cq_wt,qg_num,qg_wt,agree_ratio,conf_median,conf_p95,"
         "unconfirmed,seed,consistency_broken";
}

std::string MetricsReport::csv_row(const SimConfig& config) const {
  std::ostringstream out;
  out << config.params.rho << ',' << config.params.p * double(config.params.delta) << ','
      << config.params.q << ',' << config.params.theta << ',' << chain_quality_by_number << ','
      << chain_quality_by_weight << ',' << quality_growth_by_number << ','
      << quality_growth_by_weight << ',' << agreement_duration_ratio << ','
      << confirmation_median << ',' << confirmation_p95 << ',' << unconfirmed_count << ','
      << config.seed << ',' << (consistency_broken ? 1 : 0);
  return out.str();
}

}  // namespace ironclad
