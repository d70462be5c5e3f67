// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fcmplan/error.hpp"
#include "fcmplan/instance.hpp"
#include "fcmplan/rng.hpp"
#include "fcmplan/validation.hpp"

namespace fcmplan {

struct NodeShock {
  std::string node;                        // LoadNode id
  std::map<std::string, int> requirement;  // FcmType id -> units needed
  std::vector<double> ramp_profile;        // kW deviation per time step; + surge, - drop
  double duration = 0.0;                   // hours

  bool operator==(const NodeShock&) const = default;
};

struct DemandShockScenario {
  int id = 0;
  double probability = 0.0;
  std::vector<NodeShock> shocks;  // affected set: one entry per distinct node

  bool operator==(const DemandShockScenario&) const = default;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Range&) const = default;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
  bool operator==(const IntRange&) const = default;
};

struct GenConfig {
  int scenario_count = 1;
  std::uint64_t seed = 0;
  IntRange shocks_per_scenario{1, 1};
  Range magnitude_fraction{0.5, 1.0};   // peak deviation as a multiple of base load
  Range ramp_step_fraction{0.25, 0.5};  // per-step slew as a fraction of the peak
  double sign_mix = 1.0;                // probability a shock is a surge rather than a drop
  Range duration_hours{0.5, 1.5};
  std::map<std::string, double> type_split;  // FcmType id -> fraction of peak power

  bool operator==(const GenConfig&) const = default;
};

struct ScenarioSet {
  GenConfig config;
  std::uint64_t seed = 0;  // generating seed, echoed for provenance
  std::vector<DemandShockScenario> scenarios;

  bool operator==(const ScenarioSet&) const = default;
};

// Units per type covering the profile peak: ceil(peak * split / rating),
// zero for types with zero split. The 1e-9 backoff keeps exact multiples
// from ceiling up on floating-point noise.
inline std::map<std::string, int> profile_to_requirements(const std::vector<double>& profile,
                                                          const std::vector<FcmType>& catalog,
                                                          const std::map<std::string, double>& split) {
  double peak = 0.0;
  for (double p : profile) peak = std::max(peak, std::abs(p));
  std::map<std::string, int> req;
  for (const auto& [type_id, frac] : split) {
    if (frac <= 0.0) {
      req[type_id] = 0;
      continue;
    }
    const FcmType* type = nullptr;
    for (const auto& t : catalog)
      if (t.id == type_id) type = &t;
    if (type == nullptr) throw Error(ErrorCode::kConfig, "type_split references unknown type " + type_id);
    req[type_id] = static_cast<int>(std::ceil(peak * frac / type->unit_power_rating - 1e-9));
  }
  return req;
}

inline ValidationReport validate_gen_config(const GenConfig& cfg, const Instance& inst) {
  ValidationReport report;
  if (cfg.scenario_count < 1) report.add("scenario_count", "must be >= 1");
  if (cfg.shocks_per_scenario.lo < 1) report.add("shocks_per_scenario", "low end must be >= 1");
  if (cfg.shocks_per_scenario.lo > cfg.shocks_per_scenario.hi) {
    report.add("shocks_per_scenario", "empty range");
  }
  if (cfg.shocks_per_scenario.hi > static_cast<int>(inst.nodes.size())) {
    report.add("shocks_per_scenario", "exceeds load node count");
  }
  if (cfg.magnitude_fraction.lo < 0.0 || cfg.magnitude_fraction.lo > cfg.magnitude_fraction.hi) {
    report.add("magnitude_fraction", "range must be non-empty and non-negative");
  }
  if (!(cfg.ramp_step_fraction.lo > 0.0) || cfg.ramp_step_fraction.lo > cfg.ramp_step_fraction.hi) {
    report.add("ramp_step_fraction", "range must be non-empty and positive");
  }
  if (cfg.sign_mix < 0.0 || cfg.sign_mix > 1.0) report.add("sign_mix", "must be in [0,1]");
  if (!(cfg.duration_hours.lo > 0.0) || cfg.duration_hours.lo > cfg.duration_hours.hi) {
    report.add("duration_hours", "range must be non-empty and positive");
  }
  double split_sum = 0.0;
  for (const auto& [type_id, frac] : cfg.type_split) {
    if (inst.find_type(type_id) == nullptr) report.add("type_split." + type_id, "unknown FCM type");
    if (frac < 0.0) report.add("type_split." + type_id, "must be >= 0");
    split_sum += frac;
  }
  if (std::abs(split_sum - 1.0) > 1e-9) report.add("type_split", "fractions must sum to 1");
  return report;
}

// Monte Carlo demand-shock sampling: per scenario, draw the shock count,
// the affected nodes (weighted by volatility, without replacement), then
// per node a trapezoidal deviation profile and its unit requirements.
// Pure function of (instance, config): one private stream, no globals;
// a fixed seed reproduces the set byte for byte through save_set.
inline ScenarioSet generate_scenarios(const Instance& inst, const GenConfig& cfg) {
  const ValidationReport report = validate_gen_config(cfg, inst);
  if (!report.ok()) throw Error(ErrorCode::kConfig, "\n" + report.to_string());

  Rng rng(cfg.seed);
  ScenarioSet set;
  set.config = cfg;
  set.seed = cfg.seed;

  const int steps_per_hour_den = 1;  // duration is hours; step count from time_step_minutes
  (void)steps_per_hour_den;

  for (int s = 0; s < cfg.scenario_count; ++s) {
    DemandShockScenario scen;
    scen.id = s;
    scen.probability = 1.0 / static_cast<double>(cfg.scenario_count);

    const int count = static_cast<int>(
        rng.uniform_int(cfg.shocks_per_scenario.lo, cfg.shocks_per_scenario.hi));

    // Weighted sampling without replacement.
    std::vector<std::size_t> remaining(inst.nodes.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    std::vector<std::size_t> picked;
    for (int c = 0; c < count && !remaining.empty(); ++c) {
      std::vector<double> weights;
      weights.reserve(remaining.size());
      for (std::size_t i : remaining) weights.push_back(inst.nodes[i].volatility_weight);
      double total = 0.0;
      for (double w : weights) total += w;
      std::size_t at = 0;
      if (total > 0.0) {
        at = rng.pick_weighted(weights);
      } else {
        at = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(remaining.size()) - 1));
      }
      picked.push_back(remaining[at]);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(at));
    }

    for (std::size_t node_ix : picked) {
      const LoadNode& node = inst.nodes[node_ix];
      const double magnitude = rng.uniform(cfg.magnitude_fraction.lo, cfg.magnitude_fraction.hi);
      const bool surge = rng.bernoulli(cfg.sign_mix);
      const double duration = rng.uniform(cfg.duration_hours.lo, cfg.duration_hours.hi);
      const double step_frac = rng.uniform(cfg.ramp_step_fraction.lo, cfg.ramp_step_fraction.hi);

      const double peak = magnitude * node.base_load;
      const double sign = surge ? 1.0 : -1.0;
      const int steps = static_cast<int>(std::ceil(duration * 60.0 / inst.time_step_minutes - 1e-9));
      const double slew = step_frac * peak;

      NodeShock shock;
      shock.node = node.id;
      shock.duration = duration;
      shock.ramp_profile.reserve(static_cast<std::size_t>(steps));
      for (int t = 0; t < steps; ++t) {
        const double up = slew * static_cast<double>(t + 1);
        const double down = slew * static_cast<double>(steps - t);
        shock.ramp_profile.push_back(sign * std::min({up, peak, down}));
      }
      shock.requirement = profile_to_requirements(shock.ramp_profile, inst.fcm_types, cfg.type_split);
      scen.shocks.push_back(std::move(shock));
    }
    set.scenarios.push_back(std::move(scen));
  }
  return set;
}

// Structural checks for a set against the instance it will be used with.
inline ValidationReport validate_scenario_set(const ScenarioSet& set, const Instance& inst) {
  ValidationReport report;
  double prob_sum = 0.0;
  for (std::size_t s = 0; s < set.scenarios.size(); ++s) {
    const auto& scen = set.scenarios[s];
    const std::string p = "scenarios[" + std::to_string(s) + "]";
    if (!(scen.probability > 0.0 && scen.probability <= 1.0)) {
      report.add(p + ".probability", "must be in (0,1]");
    }
    prob_sum += scen.probability;
    if (scen.shocks.empty()) report.add(p + ".shocks", "affected set must be non-empty");
    for (std::size_t k = 0; k < scen.shocks.size(); ++k) {
      const auto& shock = scen.shocks[k];
      const std::string sp = p + ".shocks[" + std::to_string(k) + "]";
      if (inst.find_node(shock.node) == nullptr) report.add(sp + ".node", "unknown load node");
      if (!(shock.duration > 0.0)) report.add(sp + ".duration", "must be > 0");
      const auto expect = static_cast<std::size_t>(
          std::ceil(shock.duration * 60.0 / inst.time_step_minutes - 1e-9));
      if (shock.ramp_profile.size() != expect) {
        report.add(sp + ".ramp_profile", "length must be ceil(duration*60/time_step_minutes)");
      }
      for (const auto& [type_id, units] : shock.requirement) {
        if (inst.find_type(type_id) == nullptr) report.add(sp + ".requirement." + type_id, "unknown FCM type");
        if (units < 0) report.add(sp + ".requirement." + type_id, "must be >= 0");
      }
      for (std::size_t k2 = k + 1; k2 < scen.shocks.size(); ++k2) {
        if (scen.shocks[k2].node == shock.node) {
          report.add(p + ".shocks[" + std::to_string(k2) + "].node", "node appears twice");
        }
      }
    }
  }
  if (!set.scenarios.empty() && std::abs(prob_sum - 1.0) > 1e-9) {
    report.add("scenarios", "probabilities must sum to 1");
  }
  if (set.scenarios.empty()) report.add("scenarios", "set must contain at least one scenario");
  return report;
}

}  // namespace fcmplan
