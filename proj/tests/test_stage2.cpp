// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "fcmplan/milp/check.hpp"
#include "fcmplan/stage2.hpp"
#include "fcmplan/rng.hpp"

using namespace fcmplan;

namespace {

// Path network 1-2-3-4; hub_near two minutes from the node, hub_far far
// outside any reasonable window.
Instance stage2_instance(double window_min, double gamma) {
  Instance inst;
  inst.fcm_types.push_back({"bess", FcmCategory::kBess, 200.0, 400.0, 0.95, 0.95, 150.0, 1.0, 15.0});
  inst.fcm_types.push_back({"gen", FcmCategory::kFastGen, 250.0, 0.0, 1.0, 1.0, 125.0, 2.0, 5.0});
  inst.suppliers.push_back({"sup", 1, {{"bess", 8}, {"gen", 8}}});
  inst.hubs.push_back({"hub_near", 2, 100.0, 10});
  inst.hubs.push_back({"hub_far", 4, 100.0, 10});
  inst.nodes.push_back({"node", 3, 500.0, true, 2.0, window_min,
                        {{"bess", 300.0}, {"gen", 250.0}}});
  inst.network.buses = {1, 2, 3, 4};
  inst.network.lines = {{1, 2, 1.0}, {2, 3, 2.0}, {3, 4, 30.0}};
  inst.risk = {0.8, 0.5, gamma, 1.0};  // travel speed 1 km/min
  inst.time_step_minutes = 5.0;
  return inst;
}

DemandShockScenario bess_scenario(int units, double duration_hours = 1.0) {
  DemandShockScenario scen;
  scen.id = 0;
  scen.probability = 1.0;
  NodeShock shock;
  shock.node = "node";
  shock.duration = duration_hours;
  shock.requirement = {{"bess", units}};
  const int steps = static_cast<int>(std::ceil(duration_hours * 60.0 / 5.0));
  const double peak = 200.0 * units;
  for (int t = 0; t < steps; ++t) {
    shock.ramp_profile.push_back(std::min({0.5 * peak * (t + 1), peak, 0.5 * peak * (steps - t)}));
  }
  scen.shocks.push_back(shock);
  return scen;
}

}  // namespace

TEST_CASE("stage2: empty staging pays the full shortfall", "[stage2]") {
  const Instance inst = stage2_instance(20.0, 2.0);
  const auto dm = distance_matrix(inst.network);
  const auto scen = bess_scenario(2);
  const auto sol = solve_stage2({}, scen, inst, dm);
  REQUIRE(sol.decision.dispatch.empty());
  REQUIRE_FALSE(sol.decision.stabilized.at("node"));
  // Q = P*d + gamma*load*T = 300*2 + 2*500*1.
  REQUIRE_THAT(sol.decision.q_cost, Catch::Matchers::WithinAbs(1600.0, 1e-9));
  REQUIRE(milp::check_solution(sol.model, sol.raw.x).empty());
}

TEST_CASE("stage2: in-window hub covers fully and zeroes the cost", "[stage2]") {
  const Instance inst = stage2_instance(20.0, 2.0);
  const auto dm = distance_matrix(inst.network);
  const auto scen = bess_scenario(2);
  StagedUnits staged;
  staged.units["hub_near"]["bess"] = 2;
  const auto sol = solve_stage2(staged, scen, inst, dm);
  // a(hub_near) = 2 km / 1 km/min + 15 min lead = 17 <= 20.
  REQUIRE(sol.decision.units_to("node", "bess") == 2);
  REQUIRE(sol.decision.stabilized.at("node"));
  REQUIRE(sol.decision.q_cost == 0.0);
  REQUIRE(sol.decision.response_minutes.at("node") <= 20.0 + 1e-9);
  REQUIRE(sol.decision.serving.at("node").count("hub_near") == 1);
  REQUIRE(milp::check_solution(sol.model, sol.raw.x).empty());

  // Exact agreement with the exhaustive oracle on this tiny block.
  const auto oracle = milp::enumerate_oracle(sol.model);
  REQUIRE(oracle.objective == sol.raw.objective);
}

TEST_CASE("stage2: out-of-window hub ships but cannot stabilize", "[stage2]") {
  const Instance inst = stage2_instance(20.0, 0.1);  // cheap restoration, dear shortfall
  const auto dm = distance_matrix(inst.network);
  const auto scen = bess_scenario(2);
  StagedUnits staged;
  staged.units["hub_far"]["bess"] = 2;
  const auto sol = solve_stage2(staged, scen, inst, dm);
  // a(hub_far) = 30 km / 1 km/min + 15 min = 45 > 20: shortfall vanishes, u stays 0.
  REQUIRE(sol.decision.units_to("node", "bess") == 2);
  REQUIRE_FALSE(sol.decision.stabilized.at("node"));
  REQUIRE_THAT(sol.decision.q_cost, Catch::Matchers::WithinAbs(0.1 * 500.0 * 1.0, 1e-9));
  REQUIRE(sol.decision.response_minutes.at("node") >= 45.0 - 1e-9);

  const auto oracle = milp::enumerate_oracle(sol.model);
  REQUIRE(oracle.objective == sol.raw.objective);
}

TEST_CASE("stage2: randomized solves hold the coupling and cap constraints exactly", "[stage2]") {
  Rng rng(4242);
  const Instance inst = stage2_instance(25.0, 1.5);
  const auto dm = distance_matrix(inst.network);
  for (int trial = 0; trial < 40; ++trial) {
    DemandShockScenario scen;
    scen.id = trial;
    scen.probability = 1.0;
    NodeShock shock;
    shock.node = "node";
    shock.duration = 0.5;
    shock.requirement = {{"bess", static_cast<int>(rng.uniform_int(0, 3))},
                         {"gen", static_cast<int>(rng.uniform_int(0, 2))}};
    shock.ramp_profile.assign(6, 150.0);
    scen.shocks.push_back(shock);

    StagedUnits staged;
    staged.units["hub_near"]["bess"] = static_cast<int>(rng.uniform_int(0, 3));
    staged.units["hub_near"]["gen"] = static_cast<int>(rng.uniform_int(0, 2));
    staged.units["hub_far"]["bess"] = static_cast<int>(rng.uniform_int(0, 2));

    const auto sol = solve_stage2(staged, scen, inst, dm);
    REQUIRE(milp::check_solution(sol.model, sol.raw.x).empty());
    REQUIRE(sol.decision.shortfall_cost >= 0.0);

    // Coupling (per hub/type) and demand cap (per type), integer-exact.
    for (const auto& hub : inst.hubs) {
      for (const auto& type : inst.fcm_types) {
        int used = 0;
        for (const auto& s : sol.decision.dispatch) {
          if (s.hub == hub.id && s.type == type.id) used += s.units;
        }
        REQUIRE(used <= staged.at(hub.id, type.id));
      }
    }
    for (const auto& [type_id, req] : scen.shocks[0].requirement) {
      REQUIRE(sol.decision.units_to("node", type_id) <= req);
    }

    // Serving-hub bookkeeping: any shipment implies w = 1 and the
    // response time covers that hub's slowest required type.
    for (const auto& s : sol.decision.dispatch) {
      REQUIRE(sol.decision.serving.at(s.node).count(s.hub) == 1);
      const StagingHub* hub = inst.find_hub(s.hub);
      const LoadNode* node = inst.find_node(s.node);
      double a_max = 0.0;
      for (const auto& [type_id, req] : scen.shocks[0].requirement) {
        if (req <= 0) continue;
        a_max = std::max(a_max, activation_minutes(*inst.find_type(type_id),
                                                   dm.km(hub->bus, node->bus),
                                                   inst.risk.travel_speed));
      }
      REQUIRE(sol.decision.response_minutes.at(s.node) >= a_max - 1e-9);
    }
  }
}

TEST_CASE("stage2: extra staged units never increase the cost", "[stage2]") {
  Rng rng(808);
  const Instance inst = stage2_instance(22.0, 1.0);
  const auto dm = distance_matrix(inst.network);
  for (int trial = 0; trial < 25; ++trial) {
    const auto scen = bess_scenario(static_cast<int>(rng.uniform_int(1, 3)), 0.5);
    StagedUnits staged;
    staged.units["hub_near"]["bess"] = static_cast<int>(rng.uniform_int(0, 2));
    staged.units["hub_far"]["bess"] = static_cast<int>(rng.uniform_int(0, 2));
    const double q_base = solve_stage2(staged, scen, inst, dm).decision.q_cost;

    StagedUnits more = staged;
    const char* hub = rng.bernoulli(0.5) ? "hub_near" : "hub_far";
    more.units[hub]["bess"] += 1;
    const double q_more = solve_stage2(more, scen, inst, dm).decision.q_cost;
    REQUIRE(q_more <= q_base);
  }
}

TEST_CASE("stage2: random tiny pairs agree exactly with the oracle", "[stage2]") {
  Rng rng(555);
  const Instance inst = stage2_instance(20.0, 0.8);
  const auto dm = distance_matrix(inst.network);
  for (int trial = 0; trial < 30; ++trial) {
    DemandShockScenario scen;
    scen.id = trial;
    scen.probability = 1.0;
    NodeShock shock;
    shock.node = "node";
    shock.duration = rng.uniform(0.25, 1.5);
    shock.requirement = {{"bess", static_cast<int>(rng.uniform_int(0, 2))},
                         {"gen", static_cast<int>(rng.uniform_int(0, 2))}};
    const int steps = static_cast<int>(std::ceil(shock.duration * 60.0 / 5.0));
    shock.ramp_profile.assign(static_cast<std::size_t>(steps), 100.0);
    scen.shocks.push_back(shock);

    StagedUnits staged;
    staged.units["hub_near"]["bess"] = static_cast<int>(rng.uniform_int(0, 2));
    staged.units["hub_far"]["gen"] = static_cast<int>(rng.uniform_int(0, 2));

    const auto sol = solve_stage2(staged, scen, inst, dm);
    const auto oracle = milp::enumerate_oracle(sol.model);
    REQUIRE(oracle.status == milp::SolveStatus::kOptimal);
    REQUIRE(sol.raw.objective == oracle.objective);
  }
}
