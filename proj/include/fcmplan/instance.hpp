// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fcmplan/error.hpp"
#include "fcmplan/validation.hpp"

namespace fcmplan {

enum class FcmCategory { kBess, kFastGen, kDemandResponse, kPsh };

inline const char* to_string(FcmCategory c) {
  switch (c) {
    case FcmCategory::kBess: return "BESS";
    case FcmCategory::kFastGen: return "FAST_GEN";
    case FcmCategory::kDemandResponse: return "DEMAND_RESPONSE";
    case FcmCategory::kPsh: return "PSH";
  }
  return "?";
}

inline bool category_from_string(const std::string& s, FcmCategory& out) {
  if (s == "BESS") out = FcmCategory::kBess;
  else if (s == "FAST_GEN") out = FcmCategory::kFastGen;
  else if (s == "DEMAND_RESPONSE") out = FcmCategory::kDemandResponse;
  else if (s == "PSH") out = FcmCategory::kPsh;
  else return false;
  return true;
}

// Storage categories carry an energy rating and obey SoC dynamics; the
// others are treated as energy-unconstrained within a scenario.
inline bool is_storage(FcmCategory c) {
  return c == FcmCategory::kBess || c == FcmCategory::kPsh;
}

struct FcmType {
  std::string id;
  FcmCategory category = FcmCategory::kBess;
  double unit_power_rating = 0.0;     // kW per unit
  double unit_energy_rating = 0.0;    // kWh per unit; 0 for non-storage categories
  double eta_ch = 1.0;                // charge efficiency, (0,1]
  double eta_dis = 1.0;               // discharge efficiency, (0,1]
  double unit_ramp_limit = 0.0;       // kW per time step per unit
  double unit_transport_cost = 0.0;   // currency per unit per km
  double activation_lead_time = 0.0;  // minutes from dispatch order to output

  bool operator==(const FcmType&) const = default;
};

struct Supplier {
  std::string id;
  int bus = 0;
  std::map<std::string, int> inventory;  // FcmType id -> units on hand; absent = 0

  int units_of(const std::string& type_id) const {
    auto it = inventory.find(type_id);
    return it == inventory.end() ? 0 : it->second;
  }
  bool operator==(const Supplier&) const = default;
};

struct StagingHub {
  std::string id;
  int bus = 0;
  double setup_cost = 0.0;
  int capacity_units = 0;

  bool operator==(const StagingHub&) const = default;
};

struct LoadNode {
  std::string id;
  int bus = 0;
  double base_load = 0.0;         // kW
  bool is_data_center = false;
  double volatility_weight = 0.0; // sampling weight for shock membership
  double stabilize_window = 0.0;  // minutes allowed for restoration
  std::map<std::string, double> shortfall_penalty;  // FcmType id -> currency per unit

  double penalty_of(const std::string& type_id) const {
    auto it = shortfall_penalty.find(type_id);
    return it == shortfall_penalty.end() ? 0.0 : it->second;
  }
  bool operator==(const LoadNode&) const = default;
};

struct Line {
  int from = 0;
  int to = 0;
  double length_km = 1.0;

  bool operator==(const Line&) const = default;
};

struct Network {
  std::vector<int> buses;
  std::vector<Line> lines;

  bool operator==(const Network&) const = default;
};

struct RiskParams {
  double alpha = 0.9;        // CVaR confidence level, [0,1)
  double lambda = 0.5;       // risk-aversion blend weight, [0,1]
  double gamma = 0.0;        // currency per kWh unserved
  double travel_speed = 1.0; // km per minute

  bool operator==(const RiskParams&) const = default;
};

struct Instance {
  std::vector<FcmType> fcm_types;
  std::vector<Supplier> suppliers;
  std::vector<StagingHub> hubs;
  std::vector<LoadNode> nodes;
  Network network;
  RiskParams risk;
  double time_step_minutes = 5.0;
  double initial_soc_fraction = 1.0;  // pre-event storage charge level

  const FcmType* find_type(const std::string& id) const {
    for (const auto& t : fcm_types)
      if (t.id == id) return &t;
    return nullptr;
  }
  const LoadNode* find_node(const std::string& id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  const StagingHub* find_hub(const std::string& id) const {
    for (const auto& h : hubs)
      if (h.id == id) return &h;
    return nullptr;
  }

  bool operator==(const Instance&) const = default;
};

// All-pairs shortest-path distances over line lengths, indexed by bus id.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<int> buses, std::vector<double> dist)
      : buses_(std::move(buses)), dist_(std::move(dist)) {
    for (std::size_t i = 0; i < buses_.size(); ++i) pos_[buses_[i]] = static_cast<int>(i);
  }

  double km(int bus_a, int bus_b) const {
    const auto a = pos_.find(bus_a);
    const auto b = pos_.find(bus_b);
    if (a == pos_.end() || b == pos_.end()) {
      throw Error(ErrorCode::kDomain, "unknown bus in distance lookup");
    }
    return dist_[static_cast<std::size_t>(a->second) * buses_.size() + static_cast<std::size_t>(b->second)];
  }

  const std::vector<int>& buses() const { return buses_; }

 private:
  std::vector<int> buses_;
  std::vector<double> dist_;  // row-major, bus order
  std::map<int, int> pos_;
};

// Floyd-Warshall over the line list. Throws kDisconnected naming an
// unreachable bus pair.
inline DistanceMatrix distance_matrix(const Network& net) {
  const std::size_t n = net.buses.size();
  std::map<int, int> pos;
  for (std::size_t i = 0; i < n; ++i) pos[net.buses[i]] = static_cast<int>(i);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const auto& line : net.lines) {
    const auto a = pos.find(line.from);
    const auto b = pos.find(line.to);
    if (a == pos.end() || b == pos.end()) {
      throw Error(ErrorCode::kValidation, "line references unknown bus");
    }
    const auto i = static_cast<std::size_t>(a->second);
    const auto j = static_cast<std::size_t>(b->second);
    d[i * n + j] = std::min(d[i * n + j], line.length_km);
    d[j * n + i] = std::min(d[j * n + i], line.length_km);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      if (dik == inf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (dik + d[k * n + j] < d[i * n + j]) d[i * n + j] = dik + d[k * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i * n + j] == inf) {
        throw Error(ErrorCode::kDisconnected,
                    "bus " + std::to_string(net.buses[j]) + " unreachable from bus " +
                        std::to_string(net.buses[i]));
      }
    }
  }
  return DistanceMatrix(net.buses, std::move(d));
}

// Checks every domain invariant and reports all violations, not just the
// first. Pure: the instance is untouched and repeated calls agree.
inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;

  auto has_bus = [&inst](int bus) {
    return std::find(inst.network.buses.begin(), inst.network.buses.end(), bus) !=
           inst.network.buses.end();
  };

  // Catalog.
  for (std::size_t k = 0; k < inst.fcm_types.size(); ++k) {
    const auto& t = inst.fcm_types[k];
    const std::string p = "fcm_types[" + std::to_string(k) + "]";
    if (!(t.unit_power_rating > 0.0)) report.add(p + ".unit_power_rating", "must be > 0");
    if (!(t.eta_ch > 0.0 && t.eta_ch <= 1.0)) report.add(p + ".eta_ch", "must be in (0,1]");
    if (!(t.eta_dis > 0.0 && t.eta_dis <= 1.0)) report.add(p + ".eta_dis", "must be in (0,1]");
    if (!(t.unit_ramp_limit > 0.0)) report.add(p + ".unit_ramp_limit", "must be > 0");
    if (t.unit_transport_cost < 0.0) report.add(p + ".unit_transport_cost", "must be >= 0");
    if (t.unit_energy_rating < 0.0) report.add(p + ".unit_energy_rating", "must be >= 0");
    if (is_storage(t.category) && !(t.unit_energy_rating > 0.0)) {
      report.add(p + ".unit_energy_rating", "storage category requires a positive energy rating");
    }
    if (!is_storage(t.category) && t.unit_energy_rating != 0.0) {
      report.add(p + ".unit_energy_rating", "non-storage category must use 0");
    }
    if (t.activation_lead_time < 0.0) report.add(p + ".activation_lead_time", "must be >= 0");
    for (std::size_t k2 = k + 1; k2 < inst.fcm_types.size(); ++k2) {
      if (inst.fcm_types[k2].id == t.id) {
        report.add("fcm_types[" + std::to_string(k2) + "].id", "duplicate id '" + t.id + "'");
      }
    }
  }

  // Suppliers.
  for (std::size_t k = 0; k < inst.suppliers.size(); ++k) {
    const auto& s = inst.suppliers[k];
    const std::string p = "suppliers[" + std::to_string(k) + "]";
    if (!has_bus(s.bus)) report.add(p + ".bus", "bus " + std::to_string(s.bus) + " not in network");
    for (const auto& [type_id, units] : s.inventory) {
      if (inst.find_type(type_id) == nullptr) {
        report.add(p + ".inventory." + type_id, "unknown FCM type");
      }
      if (units < 0) report.add(p + ".inventory." + type_id, "must be >= 0");
    }
    for (std::size_t k2 = k + 1; k2 < inst.suppliers.size(); ++k2) {
      if (inst.suppliers[k2].id == s.id) {
        report.add("suppliers[" + std::to_string(k2) + "].id", "duplicate id '" + s.id + "'");
      }
    }
  }

  // Hubs.
  for (std::size_t k = 0; k < inst.hubs.size(); ++k) {
    const auto& h = inst.hubs[k];
    const std::string p = "hubs[" + std::to_string(k) + "]";
    if (!has_bus(h.bus)) report.add(p + ".bus", "bus " + std::to_string(h.bus) + " not in network");
    if (h.setup_cost < 0.0) report.add(p + ".setup_cost", "must be >= 0");
    if (h.capacity_units < 0) report.add(p + ".capacity_units", "must be >= 0");
    for (std::size_t k2 = k + 1; k2 < inst.hubs.size(); ++k2) {
      if (inst.hubs[k2].id == h.id) {
        report.add("hubs[" + std::to_string(k2) + "].id", "duplicate id '" + h.id + "'");
      }
    }
  }

  // Load nodes.
  for (std::size_t k = 0; k < inst.nodes.size(); ++k) {
    const auto& nd = inst.nodes[k];
    const std::string p = "nodes[" + std::to_string(k) + "]";
    if (!has_bus(nd.bus)) report.add(p + ".bus", "bus " + std::to_string(nd.bus) + " not in network");
    if (nd.base_load < 0.0) report.add(p + ".base_load", "must be >= 0");
    if (!(nd.stabilize_window > 0.0)) report.add(p + ".stabilize_window", "must be > 0");
    if (nd.volatility_weight < 0.0) report.add(p + ".volatility_weight", "must be >= 0");
    if (nd.is_data_center && !(nd.volatility_weight > 0.0)) {
      report.add(p + ".volatility_weight", "must be > 0 for data-center nodes");
    }
    for (const auto& t : inst.fcm_types) {
      if (nd.shortfall_penalty.find(t.id) == nd.shortfall_penalty.end()) {
        report.add(p + ".shortfall_penalty." + t.id, "missing penalty for catalog type");
      }
    }
    for (const auto& [type_id, pen] : nd.shortfall_penalty) {
      if (inst.find_type(type_id) == nullptr) {
        report.add(p + ".shortfall_penalty." + type_id, "unknown FCM type");
      }
      if (pen < 0.0) report.add(p + ".shortfall_penalty." + type_id, "must be >= 0");
    }
    for (std::size_t k2 = k + 1; k2 < inst.nodes.size(); ++k2) {
      if (inst.nodes[k2].id == nd.id) {
        report.add("nodes[" + std::to_string(k2) + "].id", "duplicate id '" + nd.id + "'");
      }
    }
  }

  // Network.
  if (inst.network.buses.empty()) report.add("network.buses", "must not be empty");
  for (std::size_t k = 0; k < inst.network.buses.size(); ++k) {
    for (std::size_t k2 = k + 1; k2 < inst.network.buses.size(); ++k2) {
      if (inst.network.buses[k2] == inst.network.buses[k]) {
        report.add("network.buses[" + std::to_string(k2) + "]", "duplicate bus id");
      }
    }
  }
  for (std::size_t k = 0; k < inst.network.lines.size(); ++k) {
    const auto& line = inst.network.lines[k];
    const std::string p = "network.lines[" + std::to_string(k) + "]";
    if (!(line.length_km > 0.0)) report.add(p + ".length_km", "must be > 0");
    if (!has_bus(line.from)) report.add(p + ".from", "bus not in network");
    if (!has_bus(line.to)) report.add(p + ".to", "bus not in network");
  }
  if (report.ok()) {
    // Connectivity only once the structure itself is sound.
    try {
      distance_matrix(inst.network);
    } catch (const Error& e) {
      report.add("network", e.what());
    }
  }

  // Risk parameters.
  if (!(inst.risk.alpha >= 0.0 && inst.risk.alpha < 1.0)) report.add("risk.alpha", "must be in [0,1)");
  if (!(inst.risk.lambda >= 0.0 && inst.risk.lambda <= 1.0)) report.add("risk.lambda", "must be in [0,1]");
  if (inst.risk.gamma < 0.0) report.add("risk.gamma", "must be >= 0");
  if (!(inst.risk.travel_speed > 0.0)) report.add("risk.travel_speed", "must be > 0");

  if (inst.suppliers.empty()) report.add("suppliers", "at least one supplier required");
  if (inst.hubs.empty()) report.add("hubs", "at least one staging hub required");
  if (inst.nodes.empty()) report.add("nodes", "at least one load node required");
  if (!(inst.time_step_minutes > 0.0)) report.add("time_step_minutes", "must be > 0");
  if (!(inst.initial_soc_fraction >= 0.0 && inst.initial_soc_fraction <= 1.0)) {
    report.add("initial_soc_fraction", "must be in [0,1]");
  }
  return report;
}

// Dispatch travel-plus-activation time in minutes for one FCM type.
// Demand-response contracts have no physical travel leg, so only their
// activation lead applies.
inline double activation_minutes(const FcmType& type, double distance_km, double travel_speed) {
  if (type.category == FcmCategory::kDemandResponse) return type.activation_lead_time;
  return distance_km / travel_speed + type.activation_lead_time;
}

}  // namespace fcmplan
