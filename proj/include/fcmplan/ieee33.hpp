// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "fcmplan/instance_io.hpp"

namespace fcmplan {

// Canonical 33-bus radial feeder (Baran-Wu bus/branch topology: 33 buses,
// 32 branches) dressed with the planning data this tool needs: three
// data-center nodes modeled as scaled load equivalents, two regular
// volatile nodes, three candidate staging hubs and two suppliers. Line
// lengths default to 1 km; the same document ships as data/ieee33.json
// for CLI use and the two are kept byte-identical by test.
inline constexpr std::string_view kIeee33Json = R"json({
  "fcm_types": [
    {
      "id": "bess_0250",
      "category": "BESS",
      "unit_power_rating": 250.0,
      "unit_energy_rating": 500.0,
      "eta_ch": 0.95,
      "eta_dis": 0.95,
      "unit_ramp_limit": 150.0,
      "unit_transport_cost": 1.6,
      "activation_lead_time": 20.0
    },
    {
      "id": "fastgen_0400",
      "category": "FAST_GEN",
      "unit_power_rating": 400.0,
      "unit_energy_rating": 0.0,
      "eta_ch": 1.0,
      "eta_dis": 1.0,
      "unit_ramp_limit": 200.0,
      "unit_transport_cost": 2.4,
      "activation_lead_time": 10.0
    },
    {
      "id": "dr_0200",
      "category": "DEMAND_RESPONSE",
      "unit_power_rating": 200.0,
      "unit_energy_rating": 0.0,
      "eta_ch": 1.0,
      "eta_dis": 1.0,
      "unit_ramp_limit": 200.0,
      "unit_transport_cost": 0.0,
      "activation_lead_time": 30.0
    },
    {
      "id": "psh_1500",
      "category": "PSH",
      "unit_power_rating": 1500.0,
      "unit_energy_rating": 6000.0,
      "eta_ch": 0.88,
      "eta_dis": 0.9,
      "unit_ramp_limit": 300.0,
      "unit_transport_cost": 12.0,
      "activation_lead_time": 45.0
    }
  ],
  "suppliers": [
    {
      "id": "sup_metro",
      "bus": 1,
      "inventory": { "bess_0250": 8, "fastgen_0400": 5, "dr_0200": 6, "psh_1500": 1 }
    },
    {
      "id": "sup_east",
      "bus": 19,
      "inventory": { "bess_0250": 6, "fastgen_0400": 4, "dr_0200": 4 }
    }
  ],
  "hubs": [
    { "id": "hub_feeder_head", "bus": 2, "setup_cost": 1300.0, "capacity_units": 10 },
    { "id": "hub_midline", "bus": 14, "setup_cost": 950.0, "capacity_units": 8 },
    { "id": "hub_east_spur", "bus": 25, "setup_cost": 1150.0, "capacity_units": 9 }
  ],
  "nodes": [
    {
      "id": "dc_alpha",
      "bus": 6,
      "base_load": 2400.0,
      "is_data_center": true,
      "volatility_weight": 4.0,
      "stabilize_window": 35.0,
      "shortfall_penalty": { "bess_0250": 320.0, "fastgen_0400": 260.0, "dr_0200": 150.0, "psh_1500": 600.0 }
    },
    {
      "id": "dc_beta",
      "bus": 24,
      "base_load": 3100.0,
      "is_data_center": true,
      "volatility_weight": 5.0,
      "stabilize_window": 30.0,
      "shortfall_penalty": { "bess_0250": 350.0, "fastgen_0400": 280.0, "dr_0200": 160.0, "psh_1500": 650.0 }
    },
    {
      "id": "dc_gamma",
      "bus": 30,
      "base_load": 1800.0,
      "is_data_center": true,
      "volatility_weight": 3.0,
      "stabilize_window": 40.0,
      "shortfall_penalty": { "bess_0250": 300.0, "fastgen_0400": 240.0, "dr_0200": 140.0, "psh_1500": 560.0 }
    },
    {
      "id": "ind_park",
      "bus": 12,
      "base_load": 760.0,
      "is_data_center": false,
      "volatility_weight": 1.5,
      "stabilize_window": 60.0,
      "shortfall_penalty": { "bess_0250": 220.0, "fastgen_0400": 180.0, "dr_0200": 90.0, "psh_1500": 420.0 }
    },
    {
      "id": "civic_block",
      "bus": 18,
      "base_load": 540.0,
      "is_data_center": false,
      "volatility_weight": 1.0,
      "stabilize_window": 75.0,
      "shortfall_penalty": { "bess_0250": 200.0, "fastgen_0400": 160.0, "dr_0200": 80.0, "psh_1500": 380.0 }
    }
  ],
  "network": {
    "buses": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31, 32, 33],
    "lines": [
      { "from": 1, "to": 2, "length_km": 1.0 },
      { "from": 2, "to": 3, "length_km": 1.0 },
      { "from": 3, "to": 4, "length_km": 1.0 },
      { "from": 4, "to": 5, "length_km": 1.0 },
      { "from": 5, "to": 6, "length_km": 1.0 },
      { "from": 6, "to": 7, "length_km": 1.0 },
      { "from": 7, "to": 8, "length_km": 1.0 },
      { "from": 8, "to": 9, "length_km": 1.0 },
      { "from": 9, "to": 10, "length_km": 1.0 },
      { "from": 10, "to": 11, "length_km": 1.0 },
      { "from": 11, "to": 12, "length_km": 1.0 },
      { "from": 12, "to": 13, "length_km": 1.0 },
      { "from": 13, "to": 14, "length_km": 1.0 },
      { "from": 14, "to": 15, "length_km": 1.0 },
      { "from": 15, "to": 16, "length_km": 1.0 },
      { "from": 16, "to": 17, "length_km": 1.0 },
      { "from": 17, "to": 18, "length_km": 1.0 },
      { "from": 2, "to": 19, "length_km": 1.0 },
      { "from": 19, "to": 20, "length_km": 1.0 },
      { "from": 20, "to": 21, "length_km": 1.0 },
      { "from": 21, "to": 22, "length_km": 1.0 },
      { "from": 3, "to": 23, "length_km": 1.0 },
      { "from": 23, "to": 24, "length_km": 1.0 },
      { "from": 24, "to": 25, "length_km": 1.0 },
      { "from": 6, "to": 26, "length_km": 1.0 },
      { "from": 26, "to": 27, "length_km": 1.0 },
      { "from": 27, "to": 28, "length_km": 1.0 },
      { "from": 28, "to": 29, "length_km": 1.0 },
      { "from": 29, "to": 30, "length_km": 1.0 },
      { "from": 30, "to": 31, "length_km": 1.0 },
      { "from": 31, "to": 32, "length_km": 1.0 },
      { "from": 32, "to": 33, "length_km": 1.0 }
    ]
  },
  "risk": { "alpha": 0.9, "lambda": 0.5, "gamma": 3.0, "travel_speed": 0.8 },
  "time_step_minutes": 5,
  "initial_soc_fraction": 1.0
}
)json";

// Deterministic in-memory construction of the bundled instance.
inline Instance builtin_ieee33() {
  return instance_from_json_checked(parse_json_text(std::string(kIeee33Json), "builtin ieee33"));
}

}  // namespace fcmplan
