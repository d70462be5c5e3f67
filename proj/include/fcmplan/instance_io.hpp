// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "fcmplan/instance.hpp"
#include "fcmplan/json_util.hpp"

namespace fcmplan {

// Instance document layout: one JSON object with keys `fcm_types`,
// `suppliers`, `hubs`, `nodes`, `network`, `risk`, `time_step_minutes`
// and optional `initial_soc_fraction`. Field names follow the domain
// types one-to-one; unknown keys anywhere are validation errors.

inline Instance instance_from_json(const Json& j, ValidationReport& report) {
  Instance inst;
  JsonReader root(j, "", report);

  if (const Json* arr = root.array("fcm_types")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      JsonReader r((*arr)[k], "fcm_types[" + std::to_string(k) + "]", report);
      FcmType t;
      t.id = r.text("id");
      const std::string cat = r.text("category");
      if (!category_from_string(cat, t.category)) {
        report.add(r.member("category"), "unknown category '" + cat + "'");
      }
      t.unit_power_rating = r.number("unit_power_rating");
      t.unit_energy_rating = r.number("unit_energy_rating");
      t.eta_ch = r.number("eta_ch");
      t.eta_dis = r.number("eta_dis");
      t.unit_ramp_limit = r.number("unit_ramp_limit");
      t.unit_transport_cost = r.number("unit_transport_cost");
      t.activation_lead_time = r.number("activation_lead_time");
      r.finish();
      inst.fcm_types.push_back(std::move(t));
    }
  }

  if (const Json* arr = root.array("suppliers")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      JsonReader r((*arr)[k], "suppliers[" + std::to_string(k) + "]", report);
      Supplier s;
      s.id = r.text("id");
      s.bus = static_cast<int>(r.integer("bus"));
      if (const Json* inv = r.object("inventory")) {
        for (const auto& item : inv->items()) {
          if (!item.value().is_number_integer()) {
            report.add(r.member("inventory") + "." + item.key(), "expected an integer");
            continue;
          }
          s.inventory[item.key()] = item.value().get<int>();
        }
      }
      r.finish();
      inst.suppliers.push_back(std::move(s));
    }
  }

  if (const Json* arr = root.array("hubs")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      JsonReader r((*arr)[k], "hubs[" + std::to_string(k) + "]", report);
      StagingHub h;
      h.id = r.text("id");
      h.bus = static_cast<int>(r.integer("bus"));
      h.setup_cost = r.number("setup_cost");
      h.capacity_units = static_cast<int>(r.integer("capacity_units"));
      r.finish();
      inst.hubs.push_back(std::move(h));
    }
  }

  if (const Json* arr = root.array("nodes")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      JsonReader r((*arr)[k], "nodes[" + std::to_string(k) + "]", report);
      LoadNode n;
      n.id = r.text("id");
      n.bus = static_cast<int>(r.integer("bus"));
      n.base_load = r.number("base_load");
      n.is_data_center = r.boolean("is_data_center");
      n.volatility_weight = r.number("volatility_weight");
      n.stabilize_window = r.number("stabilize_window");
      if (const Json* pen = r.object("shortfall_penalty")) {
        for (const auto& item : pen->items()) {
          if (!item.value().is_number()) {
            report.add(r.member("shortfall_penalty") + "." + item.key(), "expected a number");
            continue;
          }
          n.shortfall_penalty[item.key()] = item.value().get<double>();
        }
      }
      r.finish();
      inst.nodes.push_back(std::move(n));
    }
  }

  if (const Json* net = root.object("network")) {
    JsonReader r(*net, "network", report);
    if (const Json* buses = r.array("buses")) {
      for (std::size_t k = 0; k < buses->size(); ++k) {
        if (!(*buses)[k].is_number_integer()) {
          report.add("network.buses[" + std::to_string(k) + "]", "expected an integer");
          continue;
        }
        inst.network.buses.push_back((*buses)[k].get<int>());
      }
    }
    if (const Json* lines = r.array("lines")) {
      for (std::size_t k = 0; k < lines->size(); ++k) {
        JsonReader lr((*lines)[k], "network.lines[" + std::to_string(k) + "]", report);
        Line line;
        line.from = static_cast<int>(lr.integer("from"));
        line.to = static_cast<int>(lr.integer("to"));
        line.length_km = lr.number_or("length_km", 1.0);  // default per-line length: 1 km
        lr.finish();
        inst.network.lines.push_back(line);
      }
    }
    r.finish();
  }

  if (const Json* risk = root.object("risk")) {
    JsonReader r(*risk, "risk", report);
    inst.risk.alpha = r.number("alpha");
    inst.risk.lambda = r.number("lambda");
    inst.risk.gamma = r.number("gamma");
    inst.risk.travel_speed = r.number("travel_speed");
    r.finish();
  }

  inst.time_step_minutes = root.number("time_step_minutes");
  inst.initial_soc_fraction = root.number_or("initial_soc_fraction", 1.0);
  root.finish();
  return inst;
}

inline Json instance_to_json(const Instance& inst) {
  Json j;
  j["fcm_types"] = Json::array();
  for (const auto& t : inst.fcm_types) {
    j["fcm_types"].push_back({{"id", t.id},
                              {"category", to_string(t.category)},
                              {"unit_power_rating", t.unit_power_rating},
                              {"unit_energy_rating", t.unit_energy_rating},
                              {"eta_ch", t.eta_ch},
                              {"eta_dis", t.eta_dis},
                              {"unit_ramp_limit", t.unit_ramp_limit},
                              {"unit_transport_cost", t.unit_transport_cost},
                              {"activation_lead_time", t.activation_lead_time}});
  }
  j["suppliers"] = Json::array();
  for (const auto& s : inst.suppliers) {
    Json inv = Json::object();
    for (const auto& [k, v] : s.inventory) inv[k] = v;
    j["suppliers"].push_back({{"id", s.id}, {"bus", s.bus}, {"inventory", inv}});
  }
  j["hubs"] = Json::array();
  for (const auto& h : inst.hubs) {
    j["hubs"].push_back({{"id", h.id},
                         {"bus", h.bus},
                         {"setup_cost", h.setup_cost},
                         {"capacity_units", h.capacity_units}});
  }
  j["nodes"] = Json::array();
  for (const auto& n : inst.nodes) {
    Json pen = Json::object();
    for (const auto& [k, v] : n.shortfall_penalty) pen[k] = v;
    j["nodes"].push_back({{"id", n.id},
                          {"bus", n.bus},
                          {"base_load", n.base_load},
                          {"is_data_center", n.is_data_center},
                          {"volatility_weight", n.volatility_weight},
                          {"stabilize_window", n.stabilize_window},
                          {"shortfall_penalty", pen}});
  }
  j["network"]["buses"] = inst.network.buses;
  j["network"]["lines"] = Json::array();
  for (const auto& line : inst.network.lines) {
    j["network"]["lines"].push_back({{"from", line.from}, {"to", line.to}, {"length_km", line.length_km}});
  }
  j["risk"] = {{"alpha", inst.risk.alpha},
               {"lambda", inst.risk.lambda},
               {"gamma", inst.risk.gamma},
               {"travel_speed", inst.risk.travel_speed}};
  j["time_step_minutes"] = inst.time_step_minutes;
  j["initial_soc_fraction"] = inst.initial_soc_fraction;
  return j;
}

// Parse + full validation; throws Error(kValidation) listing every
// violation found in the document.
inline Instance instance_from_json_checked(const Json& j) {
  ValidationReport report;
  Instance inst = instance_from_json(j, report);
  if (report.ok()) {
    const ValidationReport semantic = validate_instance(inst);
    for (const auto& issue : semantic.issues()) report.add(issue.field_path, issue.message);
  }
  report.throw_if_failed();
  return inst;
}

inline Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json_checked(parse_json_file(path));
}

inline void save_instance(const Instance& inst, const std::filesystem::path& path) {
  write_text_file(path, dump_canonical(instance_to_json(inst)));
}

}  // namespace fcmplan
