#include "ironclad/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ironclad/analytics.hpp"
#include "ironclad/errors.hpp"

namespace ironclad {

namespace {

AdversaryStrategy strategy_from(const std::string& s) {
  if (s == "none") return AdversaryStrategy::None;
  if (s == "private-chain") return AdversaryStrategy::PrivateChain;
  if (s == "convergence-prevention") return AdversaryStrategy::ConvergencePrevention;
  throw ConfigError("unknown strategy: " + s);
}

DelayModel delay_from(const std::string& s) {
  if (s == "worst-case") return DelayModel::WorstCase;
  if (s == "uniform") return DelayModel::UniformUpTo;
  throw ConfigError("unknown delay model: " + s);
}

TieBreak tiebreak_from(const std::string& s) {
  if (s == "first-seen") return TieBreak::FirstSeen;
  if (s == "adversary-favoring") return TieBreak::AdversaryFavoring;
  if (s == "lowest-id") return TieBreak::LowestId;
  throw ConfigError("unknown tiebreak policy: " + s);
}

void apply_key(SimConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
  try {
    if (section == "params") {
      if (key == "p") cfg.params.p = std::stod(value);
      else if (key == "rho") cfg.params.rho = std::stod(value);
      else if (key == "delta") cfg.params.delta = std::stoull(value);
      else if (key == "q") cfg.params.q = std::stod(value);
      else if (key == "theta") cfg.params.theta = std::stod(value);
      else throw ConfigError("unknown key in [params]: " + key);
    } else if (section == "sim") {
      if (key == "miners") cfg.miners = std::stoul(value);
      else if (key == "horizon") cfg.horizon_blocks = std::stoull(value);
      else if (key == "strategy") cfg.strategy = strategy_from(value);
      else if (key == "delay") cfg.honest_delay = delay_from(value);
      else if (key == "chains") cfg.chains = std::stoul(value);
      else if (key == "tiebreak") cfg.tiebreak = tiebreak_from(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else throw ConfigError("unknown key in [sim]: " + key);
    } else {
      throw ConfigError("unknown section: [" + section + "]");
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad value for " + section + "." + key + ": " + value);
  }
}

SimConfig parse_json_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  SimConfig cfg;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) throw ConfigError("section " + section + " must be an object");
    for (const auto& [key, value] : body.items()) {
      std::string text_value;
      if (value.is_string()) {
        text_value = value.get<std::string>();
      } else {
        std::ostringstream tmp;
        tmp.precision(17);
        if (value.is_number_float()) tmp << value.get<double>();
        else tmp << value;
        text_value = tmp.str();
      }
      apply_key(cfg, section, key, text_value);
    }
  }
  return cfg;
}

}  // namespace

SimConfig parse_sim_config(const std::string& text) {
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json_config(text);

  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("bad section header on line " +
                                                std::to_string(line_no));
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value on line " + std::to_string(line_no));
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    apply_key(cfg, section, key, value);
  }
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_sim_config(buffer.str());
}

std::string to_string(AdversaryStrategy s) {
  switch (s) {
    case AdversaryStrategy::None: return "none";
    case AdversaryStrategy::PrivateChain: return "private-chain";
    case AdversaryStrategy::ConvergencePrevention: return "convergence-prevention";
  }
  return "none";
}

std::string to_string(DelayModel d) {
  return d == DelayModel::WorstCase ? "worst-case" : "uniform";
}

std::string to_string(TieBreak t) {
  switch (t) {
    case TieBreak::FirstSeen: return "first-seen";
    case TieBreak::AdversaryFavoring: return "adversary-favoring";
    case TieBreak::LowestId: return "lowest-id";
  }
  return "first-seen";
}

std::string dump_sim_config(const SimConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "[params]\n";
  out << "p = " << cfg.params.p << "\n";
  out << "rho = " << cfg.params.rho << "\n";
  out << "delta = " << cfg.params.delta << "\n";
  out << "q = " << cfg.params.q << "\n";
  out << "theta = " << cfg.params.theta << "\n";
  out << "[sim]\n";
  out << "miners = " << cfg.miners << "\n";
  out << "horizon = " << cfg.horizon_blocks << "\n";
  out << "strategy = " << to_string(cfg.strategy) << "\n";
  out << "delay = " << to_string(cfg.honest_delay) << "\n";
  out << "chains = " << cfg.chains << "\n";
  out << "tiebreak = " << to_string(cfg.tiebreak) << "\n";
  out << "seed = " << cfg.seed << "\n";
  return out.str();
}

namespace {

constexpr uint64_t kPresetDelta = 10'000;

SimConfig base_sim(double p_per_delta, double rho, double q, double theta) {
  SimConfig cfg;
  cfg.params.p = p_per_delta / static_cast<double>(kPresetDelta);
  cfg.params.rho = rho;
  cfg.params.delta = kPresetDelta;
  cfg.params.q = q;
  cfg.params.theta = theta;
  cfg.miners = 50;
  cfg.horizon_blocks = 10'000;
  cfg.strategy = AdversaryStrategy::ConvergencePrevention;
  cfg.seed = 1;
  return cfg;
}

double auto_q(const SimConfig& cfg) {
  const double p_h = (1.0 - cfg.params.rho) * cfg.params.p;
  return optimal_q_numeric(p_h, cfg.params.delta, cfg.params.theta).q;
}

const std::vector<double>& rate_grid() {
  static const std::vector<double> grid{0.01, 0.02, 0.05, 0.1, 0.25, 0.5, 1,
                                        2,    4,    10,   25,  50,  100};
  return grid;
}

}  // namespace

ExperimentPreset make_preset(const std::string& name) {
  ExperimentPreset preset;
  preset.name = name;

  const bool nakamoto = name.ends_with("-nakamoto");
  const std::string stem = nakamoto ? name.substr(0, name.size() - 9) : name;

  if (stem == "single-adv" || stem == "single-adv-heavy") {
    uint64_t index = 0;
    for (int i = 0; i <= 9; ++i) {
      const double rho = 0.05 * i;
      SimConfig cfg = base_sim(1.0, rho, 0.0, nakamoto ? 1.0 : 500.0);
      if (!nakamoto) cfg.params.q = auto_q(cfg);
      if (stem == "single-adv-heavy") {
        cfg.miners = 1000;
        cfg.horizon_blocks = 100'000;
      }
      if (rho == 0.0) cfg.strategy = AdversaryStrategy::None;
      cfg.seed = 1 + index;
      preset.points.push_back({index++, cfg, {}});
    }
    return preset;
  }
  if (stem == "single-c") {
    uint64_t index = 0;
    for (double rate : rate_grid()) {
      SimConfig cfg = base_sim(rate, 0.25, 0.0, nakamoto ? 1.0 : 500.0);
      if (!nakamoto) cfg.params.q = auto_q(cfg);
      cfg.seed = 1 + index;
      preset.points.push_back({index++, cfg, {}});
    }
    return preset;
  }
  if (stem == "parallel-adv") {
    uint64_t index = 0;
    for (double rho : {0.1, 0.2, 0.3}) {
      SimConfig cfg = base_sim(2.0, rho, 0.0, nakamoto ? 1.0 : 500.0);
      cfg.chains = 10;
      if (!nakamoto) cfg.params.q = auto_q(cfg);
      cfg.seed = 1 + index;
      preset.points.push_back({index++, cfg, {}});
    }
    return preset;
  }
  if (name == "walk-theta") {
    preset.kind = PresetKind::Walk;
    // Honest-chain iron fractions measured without attacks for
    // theta = 100..500; q pinned at the reference threshold setting.
    const std::vector<std::pair<double, double>> grid{
        {100, 0.12}, {200, 0.084}, {300, 0.065}, {400, 0.063}, {500, 0.053}};
    uint64_t index = 0;
    for (auto [theta, q_tilde] : grid) {
      WalkConfig w;
      w.theta = theta;
      w.q = 0.02;
      w.q_tilde = q_tilde;
      w.gamma = 0.5;
      w.threshold = 2.0;
      w.runs = 1'000'000;
      w.seed = 1 + index;
      preset.points.push_back({index++, {}, w});
    }
    return preset;
  }
  if (name == "walk-nakamoto") {
    preset.kind = PresetKind::Walk;
    WalkConfig w;
    w.theta = 1.0;
    w.q = 0.0;
    w.q_tilde = 0.0;
    w.gamma = 0.5;
    w.threshold = 2.0;
    w.runs = 1'000'000;
    w.seed = 1;
    preset.points.push_back({0, {}, w});
    return preset;
  }
  if (name == "adv-ratio-q") {
    // Tolerance-ratio curve over the iron probability at the reference
    // deployment point, one row per q.
    preset.kind = PresetKind::ToleranceGrid;
    uint64_t index = 0;
    for (int i = 1; i <= 60; ++i) {
      PresetPoint point;
      point.index = index++;
      point.q = 0.005 * i;  // 0.005 .. 0.30
      point.p_h = 0.75e-13;
      point.delta = 10'000'000'000'000ull;
      point.theta = 100.0;
      preset.points.push_back(point);
    }
    return preset;
  }
  throw ConfigError("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"single-adv",   "single-adv-nakamoto", "single-adv-heavy", "single-c",
          "single-c-nakamoto", "parallel-adv",   "parallel-adv-nakamoto",
          "walk-theta",   "walk-nakamoto",       "adv-ratio-q"};
}

}  // namespace ironclad
