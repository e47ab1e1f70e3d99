#include "ironclad/walk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ironclad/errors.hpp"
#include "ironclad/rng.hpp"

namespace ironclad {

void WalkConfig::validate() const {
  const auto reject = [](const char* field, const char* detail) {
    throw std::invalid_argument(std::string("invalid parameter '") + field + "': " + detail);
  };
  if (!(q >= 0.0 && q <= 1.0)) reject("q", "must be in [0,1]");
  if (!(q_tilde >= 0.0 && q_tilde <= 1.0)) reject("q_tilde", "must be in [0,1]");
  if (!(gamma > 0.0)) reject("gamma", "must be positive");
  if (!(theta >= 1.0)) reject("theta", "must be >= 1");
  if (!(threshold > 0.0)) reject("threshold", "must be positive");
  if (runs < 1) reject("runs", "must be >= 1");
}

std::array<double, 4> step_distribution(const WalkConfig& config) {
  config.validate();
  const double denom = 2.0 + config.gamma;
  std::array<double, 4> p{
      (1.0 + config.gamma) * (1.0 - config.q_tilde) / denom,
      (1.0 - config.q) / denom,
      (1.0 + config.gamma) * config.q_tilde / denom,
      config.q / denom,
  };
  if (config.normalize) {
    // The four terms sum to one identically; dividing by the computed sum
    // only scrubs rounding.  The unnormalized variant is kept selectable
    // for sensitivity runs.
    const double sum = p[0] + p[1] + p[2] + p[3];
    for (double& x : p) x /= sum;
  }
  return p;
}

namespace {

struct WorkerResult {
  std::vector<uint64_t> histogram;
  uint64_t censored = 0;
};

WorkerResult run_range(const WalkConfig& config, const std::array<double, 4>& p, uint64_t begin,
                       uint64_t end) {
  WorkerResult res;
  const double c1 = p[0];
  const double c2 = p[0] + p[1];
  const double c3 = p[0] + p[1] + p[2];
  for (uint64_t i = begin; i < end; ++i) {
    Rng rng = Rng::substream(config.seed, i);
    int64_t x = 0, y = 0;
    uint64_t down = 0;
    uint64_t steps = 0;
    while (static_cast<double>(x) + config.theta * static_cast<double>(y) < config.threshold) {
      if (++steps > config.step_cap) {
        ++res.censored;
        break;
      }
      const double u = rng.next_u01();
      if (u < c1) {
        ++x;
      } else if (u < c2) {
        --x;
        ++down;
      } else if (u < c3) {
        ++y;
      } else {
        --y;
        ++down;
      }
    }
    if (down >= res.histogram.size()) res.histogram.resize(down + 1, 0);
    ++res.histogram[down];
  }
  return res;
}

}  // namespace

WalkOutcome run_walks(const WalkConfig& config) {
  const std::array<double, 4> p = step_distribution(config);

  const unsigned workers = std::max(1u, config.workers);
  std::vector<WorkerResult> parts(workers);
  if (workers == 1) {
    parts[0] = run_range(config, p, 0, config.runs);
  } else {
    std::vector<std::thread> pool;
    const uint64_t chunk = (config.runs + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const uint64_t begin = std::min<uint64_t>(config.runs, w * chunk);
      const uint64_t end = std::min<uint64_t>(config.runs, begin + chunk);
      pool.emplace_back([&, w, begin, end] { parts[w] = run_range(config, p, begin, end); });
    }
    for (auto& t : pool) t.join();
  }

  WalkOutcome out;
  out.runs = config.runs;
  for (const auto& part : parts) {
    out.censored += part.censored;
    if (part.histogram.size() > out.histogram.size()) {
      out.histogram.resize(part.histogram.size(), 0);
    }
    for (size_t i = 0; i < part.histogram.size(); ++i) out.histogram[i] += part.histogram[i];
  }

  double total = 0.0;
  uint64_t mass = 0;
  for (size_t len = 0; len < out.histogram.size(); ++len) {
    total += static_cast<double>(len) * static_cast<double>(out.histogram[len]);
    mass += out.histogram[len];
  }
  out.mean = total / static_cast<double>(mass);
  const uint64_t p95_rank = static_cast<uint64_t>(std::ceil(0.95 * static_cast<double>(mass)));
  uint64_t seen = 0;
  for (size_t len = 0; len < out.histogram.size(); ++len) {
    seen += out.histogram[len];
    if (seen >= p95_rank) {
      out.p95 = static_cast<double>(len);
      break;
    }
  }
  return out;
}

double WalkOutcome::tail(uint64_t len) const {
  if (len >= histogram.size()) return 0.0;
  uint64_t count = 0;
  for (size_t i = len; i < histogram.size(); ++i) count += histogram[i];
  return static_cast<double>(count) / static_cast<double>(runs);
}

TailCrossover tail_crossover(const WalkOutcome& a, const WalkOutcome& b) {
  const size_t support = std::min(a.histogram.size(), b.histogram.size());
  if (support < 2) throw InsufficientSamplesError("tail support too small for a crossover");

  std::vector<double> ta(support), tb(support);
  for (size_t i = 0; i < support; ++i) {
    ta[i] = a.tail(i);
    tb[i] = b.tail(i);
  }

  for (size_t len = 1; len < support; ++len) {
    if (ta[len] <= 0.0 || tb[len] <= 0.0) {
      throw InsufficientSamplesError("a tail ran out of mass before crossing at length " +
                                     std::to_string(len));
    }
    if (tb[len] >= ta[len]) {
      if (tb[len] == ta[len] || len == 1) {
        return TailCrossover{static_cast<double>(len), ta[len]};
      }
      // Interpolate the flip between len-1 and len on log-probability.
      const double d0 = std::log(ta[len - 1]) - std::log(tb[len - 1]);
      const double d1 = std::log(ta[len]) - std::log(tb[len]);
      const double f = d0 / (d0 - d1);
      const double log_p = std::log(ta[len - 1]) + f * (std::log(ta[len]) - std::log(ta[len - 1]));
      return TailCrossover{static_cast<double>(len - 1) + f, std::exp(log_p)};
    }
  }
  throw NoRootError("tails never cross within the common support");
}

void write_histogram_csv(std::ostream& out, const WalkOutcome& outcome) {
  out << "# schema=1\n";
  out << "length,count,probability,tail\n";
  double tail = 1.0;
  for (size_t len = 0; len < outcome.histogram.size(); ++len) {
    const double prob =
        static_cast<double>(outcome.histogram[len]) / static_cast<double>(outcome.runs);
    out << len << ',' << outcome.histogram[len] << ',' << prob << ',' << tail << '\n';
    tail -= prob;
  }
}

void write_walk_summary_csv(std::ostream& out, const WalkConfig& config,
                            const WalkOutcome& outcome) {
  out << "# schema=1\n";
  out << "theta,q,q_tilde,gamma,threshold,runs,mean,p95\n";
  out << config.theta << ',' << config.q << ',' << config.q_tilde << ',' << config.gamma << ','
      << config.threshold << ',' << outcome.runs << ',' << outcome.mean << ',' << outcome.p95
      << '\n';
}

}  // namespace ironclad
