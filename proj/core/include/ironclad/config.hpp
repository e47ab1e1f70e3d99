#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ironclad/simulator.hpp"
#include "ironclad/walk.hpp"

namespace ironclad {

// Flat key-value text with [params]/[sim] sections; a JSON object with the
// same two groups is accepted as an alternative encoding.
SimConfig parse_sim_config(const std::string& text);
SimConfig load_sim_config(const std::string& path);

// Canonical key-value form; parse_sim_config(dump_sim_config(c)) == c.
std::string dump_sim_config(const SimConfig& config);

std::string to_string(AdversaryStrategy s);
std::string to_string(DelayModel d);
std::string to_string(TieBreak t);

enum class PresetKind : uint8_t { Simulation = 0, Walk = 1, ToleranceGrid = 2 };

// One grid point of a versioned experiment preset.
struct PresetPoint {
  uint64_t index = 0;
  SimConfig sim;     // for simulation presets
  WalkConfig walk;   // for walk presets
  double q = 0.0;    // for tolerance-grid presets
  double p_h = 0.0;
  uint64_t delta = 1;
  double theta = 1.0;
};

struct ExperimentPreset {
  std::string name;
  int version = 1;
  PresetKind kind = PresetKind::Simulation;
  std::vector<PresetPoint> points;
};

// Known presets; throws ConfigError for an unknown name.
ExperimentPreset make_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace ironclad
