// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "fcmplan/json_util.hpp"
#include "fcmplan/scenario.hpp"

namespace fcmplan {

// Scenario set document: `config`, `seed`, `scenarios[]`; ramp profiles
// in kW at the owning instance's time step. duration is in hours.

inline Json gen_config_to_json(const GenConfig& cfg) {
  Json split = Json::object();
  for (const auto& [k, v] : cfg.type_split) split[k] = v;
  return Json{{"scenario_count", cfg.scenario_count},
              {"seed", cfg.seed},
              {"shocks_per_scenario", {cfg.shocks_per_scenario.lo, cfg.shocks_per_scenario.hi}},
              {"magnitude_fraction", {cfg.magnitude_fraction.lo, cfg.magnitude_fraction.hi}},
              {"ramp_step_fraction", {cfg.ramp_step_fraction.lo, cfg.ramp_step_fraction.hi}},
              {"sign_mix", cfg.sign_mix},
              {"duration_hours", {cfg.duration_hours.lo, cfg.duration_hours.hi}},
              {"type_split", split}};
}

inline GenConfig gen_config_from_json(const Json& j, ValidationReport& report,
                                      const std::string& path = "") {
  JsonReader r(j, path, report);
  GenConfig cfg;
  cfg.scenario_count = static_cast<int>(r.integer("scenario_count"));
  const std::int64_t seed = r.integer("seed");
  cfg.seed = static_cast<std::uint64_t>(seed);
  auto range = [&](const char* key, auto& out) {
    if (const Json* arr = r.array(key)) {
      if (arr->size() != 2 || !(*arr)[0].is_number() || !(*arr)[1].is_number()) {
        report.add(r.member(key), "expected [low, high]");
        return;
      }
      using T = std::decay_t<decltype(out.lo)>;
      out.lo = (*arr)[0].get<T>();
      out.hi = (*arr)[1].get<T>();
    }
  };
  range("shocks_per_scenario", cfg.shocks_per_scenario);
  range("magnitude_fraction", cfg.magnitude_fraction);
  range("ramp_step_fraction", cfg.ramp_step_fraction);
  cfg.sign_mix = r.number("sign_mix");
  range("duration_hours", cfg.duration_hours);
  if (const Json* split = r.object("type_split")) {
    for (const auto& item : split->items()) {
      if (!item.value().is_number()) {
        report.add(r.member("type_split") + "." + item.key(), "expected a number");
        continue;
      }
      cfg.type_split[item.key()] = item.value().get<double>();
    }
  }
  r.finish();
  return cfg;
}

inline GenConfig load_gen_config(const std::filesystem::path& path) {
  ValidationReport report;
  GenConfig cfg = gen_config_from_json(parse_json_file(path), report);
  report.throw_if_failed();
  return cfg;
}

inline Json scenario_set_to_json(const ScenarioSet& set) {
  Json j;
  j["config"] = gen_config_to_json(set.config);
  j["seed"] = set.seed;
  j["scenarios"] = Json::array();
  for (const auto& scen : set.scenarios) {
    Json shocks = Json::array();
    for (const auto& shock : scen.shocks) {
      Json req = Json::object();
      for (const auto& [k, v] : shock.requirement) req[k] = v;
      shocks.push_back({{"node", shock.node},
                        {"requirement", req},
                        {"ramp_profile", shock.ramp_profile},
                        {"duration", shock.duration}});
    }
    j["scenarios"].push_back({{"id", scen.id}, {"probability", scen.probability}, {"shocks", shocks}});
  }
  return j;
}

inline ScenarioSet scenario_set_from_json(const Json& j) {
  ValidationReport report;
  ScenarioSet set;
  JsonReader root(j, "", report);
  if (const Json* cfg = root.object("config")) {
    set.config = gen_config_from_json(*cfg, report, "config");
  }
  set.seed = static_cast<std::uint64_t>(root.integer("seed"));
  if (const Json* arr = root.array("scenarios")) {
    for (std::size_t s = 0; s < arr->size(); ++s) {
      JsonReader r((*arr)[s], "scenarios[" + std::to_string(s) + "]", report);
      DemandShockScenario scen;
      scen.id = static_cast<int>(r.integer("id"));
      scen.probability = r.number("probability");
      if (const Json* shocks = r.array("shocks")) {
        for (std::size_t k = 0; k < shocks->size(); ++k) {
          JsonReader sr((*shocks)[k], r.member("shocks") + "[" + std::to_string(k) + "]", report);
          NodeShock shock;
          shock.node = sr.text("node");
          if (const Json* req = sr.object("requirement")) {
            for (const auto& item : req->items()) {
              if (!item.value().is_number_integer()) {
                report.add(sr.member("requirement") + "." + item.key(), "expected an integer");
                continue;
              }
              shock.requirement[item.key()] = item.value().get<int>();
            }
          }
          if (const Json* prof = sr.array("ramp_profile")) {
            for (const auto& v : *prof) {
              if (!v.is_number()) {
                report.add(sr.member("ramp_profile"), "expected numbers");
                break;
              }
              shock.ramp_profile.push_back(v.get<double>());
            }
          }
          shock.duration = sr.number("duration");
          sr.finish();
          scen.shocks.push_back(std::move(shock));
        }
      }
      r.finish();
      set.scenarios.push_back(std::move(scen));
    }
  }
  root.finish();
  report.throw_if_failed();
  return set;
}

inline void save_set(const ScenarioSet& set, const std::filesystem::path& path) {
  write_text_file(path, dump_canonical(scenario_set_to_json(set)));
}

inline ScenarioSet load_set(const std::filesystem::path& path) {
  return scenario_set_from_json(parse_json_file(path));
}

}  // namespace fcmplan
