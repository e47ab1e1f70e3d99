#include "ironclad/simulator.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "ironclad/errors.hpp"
#include "ironclad/rng.hpp"
#include "view_tracker.hpp"

namespace ironclad {

namespace {
constexpr uint64_t kNever = std::numeric_limits<uint64_t>::max();
}

void SimConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (miners < 1) throw ConfigError("miners must be >= 1");
  if (horizon_blocks < 1) throw ConfigError("horizon must be >= 1");
  if (chains < 1) throw ConfigError("chains must be >= 1");
  const double system_rate = params.p * static_cast<double>(chains);
  if (!(system_rate < 1.0)) {
    throw ConfigError("per-chain rate p times chain count must stay below 1");
  }
  // Horizon watchdog: the expected run length in slots must fit into the
  // 64-bit slot arithmetic with a wide margin.
  const double expected_slots = static_cast<double>(horizon_blocks) / system_rate;
  if (expected_slots > 0x1p62) {
    throw ConfigError("expected run length overflows slot arithmetic; raise p or lower horizon");
  }
  if (strategy == AdversaryStrategy::ConvergencePrevention && miners < 2) {
    throw ConfigError("convergence-prevention needs at least 2 miners");
  }
  WeightRatio::from_theta(params.theta);  // rejects non-rational weights early
}

namespace {

struct Delivery {
  uint64_t time;
  uint64_t seq;
  uint32_t chain;
  uint32_t recipient;
  BlockId block;
  bool operator>(const Delivery& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

// Balance-attack bookkeeping for one chain.  The adversary keeps a single
// private chain.  Above the delay-throttling threshold it outgrows the
// public chain (the public side loses a delay window per block to races,
// the private side does not), so withheld prefixes can ruin every
// convergence; below the threshold it trails by the iron weight and the
// attempt restarts from the public tip.
struct BalanceState {
  std::vector<BlockId> ladder;  // withheld private suffix, oldest first
  uint32_t next_side = 0;       // which half hears the next release first
  uint64_t ruin_inflight_until = 0;  // a ruining release is still in the air
};

struct PrivateChainState {
  BlockId base = kGenesisId;
  std::vector<BlockId> stock;  // withheld private suffix
};

class Engine {
 public:
  explicit Engine(const SimConfig& config)
      : cfg_(config),
        ratio_(WeightRatio::from_theta(config.params.theta)),
        rates_(derive_rates(config.params)),
        rng_(config.seed) {
    // Attempts are abandoned at an iron-weight deficit; without iron blocks
    // the scale collapses to a single regular block.
    giveup_scaled_ = config.params.q > 0.0 ? ratio_.iron_scaled() : ratio_.regular_scaled();
    const uint32_t m = cfg_.chains;
    trees_.reserve(m);
    for (uint32_t c = 0; c < m; ++c) {
      trees_.emplace_back(ratio_);
      views_.emplace_back(&trees_[c], cfg_.miners);
    }
    trace_.config = cfg_;
    trace_.blocks.assign(m, {TraceBlockInfo{0, 0, -1, true, false, 0}});
    balance_.assign(m, BalanceState{});
    private_.assign(m, PrivateChainState{});
    pub_best_.assign(m, kGenesisId);
    wake_pending_.assign(m, false);
    wake_deadline_passed_.assign(m, false);
    sys_h_ = rates_.p_h * static_cast<double>(m);
    sys_a_ = rates_.p_a * static_cast<double>(m);
  }

  Trace run() {
    uint64_t next_h = sys_h_ > 0.0 ? rng_.geometric_gap(sys_h_) : kNever;
    uint64_t next_a = sys_a_ > 0.0 ? rng_.geometric_gap(sys_a_) : kNever;
    uint64_t mined = 0;

    while (mined < cfg_.horizon_blocks) {
      const uint64_t t = std::min(next_h, next_a);
      drain_until(t);
      if (next_a == t) {
        mine_adversary(t);
        next_a = t + rng_.geometric_gap(sys_a_);
        if (++mined == cfg_.horizon_blocks) break;
      }
      if (next_h == t) {
        mine_honest(t);
        next_h = t + rng_.geometric_gap(sys_h_);
        ++mined;
      }
    }
    live_adversary_ = false;  // freeze the adversary, settle deliveries
    drain_until(kNever);
    trace_.end_time = end_time_;
    return std::move(trace_);
  }

 private:
  uint32_t group_of(uint32_t miner) const { return miner < cfg_.miners / 2 ? 0 : 1; }

  int64_t weight(uint32_t chain, BlockId id) const { return trees_[chain].block(id).weight; }

  void record(TraceEvent ev) {
    end_time_ = std::max(end_time_, ev.time);
    trace_.events.push_back(ev);
  }

  static constexpr uint32_t kWakeup = std::numeric_limits<uint32_t>::max();

  void drain_until(uint64_t t) {
    while (!queue_.empty() && queue_.top().time <= t) {
      const Delivery d = queue_.top();
      queue_.pop();
      if (d.recipient == kWakeup) {
        wake_pending_[d.chain] = false;
        if (live_adversary_ && cfg_.strategy == AdversaryStrategy::ConvergencePrevention) {
          wake_deadline_passed_[d.chain] = true;
          balance_react(d.chain, d.time);
          wake_deadline_passed_[d.chain] = false;
        }
        continue;
      }
      views_[d.chain].deliver(d.time, d.recipient, d.block);
      record({d.time, EventKind::Deliver, d.block, static_cast<int32_t>(d.recipient), d.chain});
      if (live_adversary_ && cfg_.strategy == AdversaryStrategy::ConvergencePrevention) {
        balance_react(d.chain, d.time);
      }
    }
  }

  void schedule(uint64_t time, uint32_t chain, uint32_t recipient, BlockId block) {
    queue_.push(Delivery{time, seq_++, chain, recipient, block});
  }

  BlockId register_block(uint32_t chain, BlockId parent, uint64_t label, int32_t miner,
                         bool honest, bool iron) {
    const BlockId id = trees_[chain].add_block(parent, label, honest, iron);
    trace_.blocks[chain].push_back(TraceBlockInfo{parent, label, miner, honest, iron, chain});
    return id;
  }

  // --- honest side -------------------------------------------------------

  void mine_honest(uint64_t t) {
    const uint32_t miner = static_cast<uint32_t>(rng_.next_below(cfg_.miners));
    const uint32_t chain =
        cfg_.chains > 1 ? static_cast<uint32_t>(rng_.next_below(cfg_.chains)) : 0;
    const bool iron = rng_.bernoulli(cfg_.params.q);
    const BlockId parent = views_[chain].tip(miner);
    const BlockId id = register_block(chain, parent, t, static_cast<int32_t>(miner), true, iron);
    views_[chain].self_mine(t, miner, id);
    record({t, EventKind::HonestMine, id, static_cast<int32_t>(miner), chain});

    for (uint32_t r = 0; r < cfg_.miners; ++r) {
      if (r == miner) continue;
      // Under attack every honest broadcast is held the full delay bound:
      // the delay throttles honest chain growth while the private chain
      // mines at full speed.
      const uint64_t delay = cfg_.honest_delay == DelayModel::WorstCase ||
                                     cfg_.strategy ==
                                         AdversaryStrategy::ConvergencePrevention
                                 ? cfg_.params.delta
                                 : 1 + rng_.next_below(cfg_.params.delta);
      schedule(t + delay, chain, r, id);
    }

    if (weight(chain, id) > weight(chain, pub_best_[chain])) pub_best_[chain] = id;
    adversary_react(chain, t);
  }

  // --- adversary side ----------------------------------------------------

  void mine_adversary(uint64_t t) {
    const uint32_t chain =
        cfg_.chains > 1 ? static_cast<uint32_t>(rng_.next_below(cfg_.chains)) : 0;
    const bool iron = rng_.bernoulli(cfg_.params.q);

    switch (cfg_.strategy) {
      case AdversaryStrategy::None: {
        // Mines on the heaviest public block and broadcasts like anyone else.
        const BlockId parent = pub_best_[chain];
        const BlockId id = register_block(chain, parent, t, -1, false, iron);
        record({t, EventKind::AdversaryMine, id, -1, chain});
        for (uint32_t r = 0; r < cfg_.miners; ++r) {
          const uint64_t delay = cfg_.honest_delay == DelayModel::WorstCase
                                     ? cfg_.params.delta
                                     : 1 + rng_.next_below(cfg_.params.delta);
          schedule(t + delay, chain, r, id);
        }
        if (weight(chain, id) > weight(chain, pub_best_[chain])) pub_best_[chain] = id;
        break;
      }
      case AdversaryStrategy::PrivateChain: {
        auto& st = private_[chain];
        const BlockId parent = st.stock.empty() ? st.base : st.stock.back();
        const BlockId id = register_block(chain, parent, t, -1, false, iron);
        record({t, EventKind::AdversaryMine, id, -1, chain});
        st.stock.push_back(id);
        adversary_react(chain, t);
        break;
      }
      case AdversaryStrategy::ConvergencePrevention: {
        auto& st = balance_[chain];
        const BlockId parent = st.ladder.empty() ? pub_best_[chain] : st.ladder.back();
        const BlockId id = register_block(chain, parent, t, -1, false, iron);
        record({t, EventKind::AdversaryMine, id, -1, chain});
        st.ladder.push_back(id);
        adversary_react(chain, t);
        break;
      }
    }
  }

  // Group g as the adversary sees it: the tip adopted by its first miner.
  BlockId group_tip(uint32_t chain, uint32_t g) const {
    return views_[chain].tip(g == 0 ? 0 : cfg_.miners / 2);
  }


  void adversary_react(uint32_t chain, uint64_t t) {
    if (cfg_.strategy == AdversaryStrategy::PrivateChain) {
      private_chain_react(chain, t);
    } else if (cfg_.strategy == AdversaryStrategy::ConvergencePrevention) {
      balance_react(chain, t);
    }
  }

  void private_chain_react(uint32_t chain, uint64_t t) {
    auto& st = private_[chain];
    if (st.stock.empty()) {
      st.base = pub_best_[chain];  // track the tip until the fork starts
      return;
    }
    const int64_t pub = weight(chain, pub_best_[chain]);
    const int64_t priv = weight(chain, st.stock.back());
    if (priv >= pub) {
      // Catch-up: publish the whole private suffix.
      for (BlockId b : st.stock) {
        for (uint32_t r = 0; r < cfg_.miners; ++r) schedule(t + 1, chain, r, b);
      }
      st.base = st.stock.back();
      pub_best_[chain] = st.stock.back();
      st.stock.clear();
    } else if (pub - priv >= giveup_scaled_) {
      // Too far behind: abandon and restart the fork at the public tip.
      st.stock.clear();
      st.base = pub_best_[chain];
    }
  }

  // Reveal the private prefix up to the first block with weight above
  // `floor` to one half of the miners; honest relays carry it to the rest
  // within a delay window.
  bool release_above(uint32_t chain, uint64_t t, uint32_t side, int64_t floor) {
    auto& ladder = balance_[chain].ladder;
    size_t cut = 0;
    while (cut < ladder.size() && weight(chain, ladder[cut]) <= floor) ++cut;
    if (cut == ladder.size()) return false;
    for (size_t i = 0; i <= cut; ++i) {
      const BlockId b = ladder[i];
      for (uint32_t r = 0; r < cfg_.miners; ++r) {
        if (group_of(r) == side) schedule(t + 1, chain, r, b);
      }
      if (weight(chain, b) > weight(chain, pub_best_[chain])) pub_best_[chain] = b;
    }
    ladder.erase(ladder.begin(), ladder.begin() + static_cast<ptrdiff_t>(cut) + 1);
    return true;
  }

  void balance_react(uint32_t chain, uint64_t t) {
    auto& st = balance_[chain];
    const BlockId tip0 = group_tip(chain, 0);
    const BlockId tip1 = group_tip(chain, 1);
    const int64_t w0 = weight(chain, tip0);
    const int64_t w1 = weight(chain, tip1);
    // Floor every reveal at the true public frontier: view tips lag the
    // frontier by in-flight deliveries, and a reveal below it is a wasted
    // bank withdrawal.
    const int64_t best = std::max({w0, w1, weight(chain, pub_best_[chain])});
    const int64_t ladder_end = st.ladder.empty() ? -1 : weight(chain, st.ladder.back());

    if (!st.ladder.empty() && best - ladder_end >= giveup_scaled_) {
      // Trailing by the iron weight: the attempt is lost; rebase on the
      // public frontier and start over.
      st.ladder.clear();
      return;
    }

    if (tip0 == tip1) {
      // The network is settling; ruin the convergence with a strictly
      // heavier private prefix, alternating which half is told first.
      // One reveal per episode: further hooks in the same breath would
      // drain the bank before the first reveal even lands.
      if (t < st.ruin_inflight_until) return;
      if (ladder_end > best) {
        release_above(chain, t, st.next_side, best);
        st.next_side = 1 - st.next_side;
        // One ruin per delay window: the divergence it buys lasts about
        // that long, and spending faster just drains the bank.
        st.ruin_inflight_until = t + cfg_.params.delta;
      }
      return;
    }

    if (w0 == w1) return;  // competing equal tips, nothing to do

    // A fresh lead only matters if it survives long enough to reach the
    // other half; wait out most of the delay window before interfering.
    if (!wake_deadline_passed_[chain]) {
      schedule_wake(chain, t);
      return;
    }
    const uint32_t light = w0 < w1 ? 0 : 1;
    if (ladder_end >= best) {
      release_above(chain, t, light, best - ratio_.regular_scaled());
    }
  }

  void schedule_wake(uint32_t chain, uint64_t t) {
    if (wake_pending_[chain]) return;
    wake_pending_[chain] = true;
    const uint64_t lead_time = cfg_.params.delta >= 4 ? cfg_.params.delta - 3 : 1;
    queue_.push(Delivery{t + lead_time, seq_++, chain, kWakeup, 0});
  }

  SimConfig cfg_;
  WeightRatio ratio_;
  DerivedRates rates_;
  Rng rng_;
  int64_t giveup_scaled_ = 1;
  double sys_h_ = 0.0;
  double sys_a_ = 0.0;

  std::vector<BlockTree> trees_;
  std::vector<detail::ViewTracker> views_;
  std::priority_queue<Delivery, std::vector<Delivery>, std::greater<>> queue_;
  uint64_t seq_ = 0;
  uint64_t end_time_ = 0;
  Trace trace_;

  std::vector<BalanceState> balance_;
  std::vector<PrivateChainState> private_;
  std::vector<BlockId> pub_best_;
  std::vector<char> wake_pending_;
  std::vector<char> wake_deadline_passed_;
  bool live_adversary_ = true;
};

}  // namespace

Trace run_simulation_trace(const SimConfig& config) {
  config.validate();
  Engine engine(config);
  return engine.run();
}

MetricsReport run_simulation(const SimConfig& config) {
  return compute_metrics(run_simulation_trace(config)).aggregate;
}

ParallelMetrics run_parallel(const SimConfig& config) {
  return compute_metrics(run_simulation_trace(config));
}

// --- trace serialization ---------------------------------------------------

void Trace::write_csv(std::ostream& out) const {
  out << "# schema=1 trace\n";
  out << "# p=" << config.params.p << " rho=" << config.params.rho
      << " delta=" << config.params.delta << " q=" << config.params.q
      << " theta=" << config.params.theta << " miners=" << config.miners
      << " horizon=" << config.horizon_blocks << " strategy=" << int(config.strategy)
      << " delay=" << int(config.honest_delay) << " chains=" << config.chains
      << " tiebreak=" << int(config.tiebreak) << " seed=" << config.seed
      << " end_time=" << end_time << "\n";
  out << "time,kind,block_id,parent_id,miner,iron,recipient,chain\n";
  const char* names[3] = {"honest-mine", "adversary-mine", "deliver"};
  for (const TraceEvent& ev : events) {
    const TraceBlockInfo& b = blocks[ev.chain][ev.block];
    out << ev.time << ',' << names[int(ev.kind)] << ',' << ev.block << ',' << b.parent << ','
        << (ev.kind == EventKind::Deliver ? b.miner : ev.actor) << ',' << (b.iron ? 1 : 0)
        << ',' << (ev.kind == EventKind::Deliver ? ev.actor : -1) << ',' << ev.chain << '\n';
  }
}

Trace Trace::read_csv(std::istream& in) {
  Trace trace;
  std::string line;
  bool have_meta = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        auto& p = trace.config;
        if (key == "p") p.params.p = std::stod(val);
        else if (key == "rho") p.params.rho = std::stod(val);
        else if (key == "delta") p.params.delta = std::stoull(val);
        else if (key == "q") p.params.q = std::stod(val);
        else if (key == "theta") p.params.theta = std::stod(val);
        else if (key == "miners") p.miners = std::stoul(val);
        else if (key == "horizon") p.horizon_blocks = std::stoull(val);
        else if (key == "strategy") p.strategy = static_cast<AdversaryStrategy>(std::stoi(val));
        else if (key == "delay") p.honest_delay = static_cast<DelayModel>(std::stoi(val));
        else if (key == "chains") p.chains = std::stoul(val);
        else if (key == "tiebreak") p.tiebreak = static_cast<TieBreak>(std::stoi(val));
        else if (key == "seed") p.seed = std::stoull(val);
        else if (key == "end_time") trace.end_time = std::stoull(val);
        have_meta = true;
      }
      continue;
    }
    if (line.rfind("time,", 0) == 0) continue;
    std::istringstream row(line);
    std::string field;
    auto next_field = [&]() {
      if (!std::getline(row, field, ',')) throw TraceError("truncated trace row: " + line);
      return field;
    };
    TraceEvent ev;
    ev.time = std::stoull(next_field());
    const std::string kind = next_field();
    if (kind == "honest-mine") ev.kind = EventKind::HonestMine;
    else if (kind == "adversary-mine") ev.kind = EventKind::AdversaryMine;
    else if (kind == "deliver") ev.kind = EventKind::Deliver;
    else throw TraceError("unknown event kind: " + kind);
    ev.block = std::stoul(next_field());
    const uint32_t parent = std::stoul(next_field());
    const int32_t miner = std::stoi(next_field());
    const bool iron = next_field() == "1";
    const int32_t recipient = std::stoi(next_field());
    ev.chain = std::stoul(next_field());

    if (trace.blocks.size() <= ev.chain) {
      trace.blocks.resize(ev.chain + 1, {TraceBlockInfo{0, 0, -1, true, false, 0}});
    }
    if (ev.kind != EventKind::Deliver) {
      auto& chain_blocks = trace.blocks[ev.chain];
      if (ev.block != chain_blocks.size()) throw TraceError("noncontiguous block ids in trace");
      chain_blocks.push_back(TraceBlockInfo{parent, ev.time, miner,
                                            ev.kind == EventKind::HonestMine, iron, ev.chain});
      ev.actor = miner;
    } else {
      ev.actor = recipient;
    }
    trace.events.push_back(ev);
  }
  if (!have_meta) throw TraceError("trace is missing its parameter header");
  if (trace.end_time == 0) {
    for (const auto& ev : trace.events) trace.end_time = std::max(trace.end_time, ev.time);
  }
  if (trace.config.chains < trace.blocks.size()) {
    trace.config.chains = static_cast<uint32_t>(trace.blocks.size());
  }
  return trace;
}

}  // namespace ironclad
