// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "fcmplan/tracking.hpp"
#include "fcmplan/rng.hpp"

using namespace fcmplan;

namespace {

Instance tracking_instance(double dt_minutes = 5.0, double soc_fraction = 1.0) {
  Instance inst;
  inst.fcm_types.push_back({"bess", FcmCategory::kBess, 200.0, 500.0, 0.95, 0.95, 150.0, 1.0, 15.0});
  inst.fcm_types.push_back({"gen", FcmCategory::kFastGen, 250.0, 0.0, 1.0, 1.0, 125.0, 2.0, 5.0});
  inst.fcm_types.push_back({"dr", FcmCategory::kDemandResponse, 150.0, 0.0, 1.0, 1.0, 150.0, 0.0, 30.0});
  inst.suppliers.push_back({"sup", 1, {{"bess", 9}}});
  inst.hubs.push_back({"hub", 2, 100.0, 20});
  inst.nodes.push_back({"node", 3, 1000.0, true, 2.0, 45.0,
                        {{"bess", 300.0}, {"gen", 250.0}, {"dr", 100.0}}});
  inst.network.buses = {1, 2, 3};
  inst.network.lines = {{1, 2, 1.0}, {2, 3, 1.0}};
  inst.risk = {0.8, 0.5, 2.0, 1.0};
  inst.time_step_minutes = dt_minutes;
  inst.initial_soc_fraction = soc_fraction;
  return inst;
}

DemandShockScenario scenario_with_profile(std::vector<double> profile, double dt_minutes,
                                          std::map<std::string, int> requirement) {
  DemandShockScenario scen;
  scen.id = 0;
  scen.probability = 1.0;
  NodeShock shock;
  shock.node = "node";
  shock.duration = static_cast<double>(profile.size()) * dt_minutes / 60.0;
  shock.ramp_profile = std::move(profile);
  shock.requirement = std::move(requirement);
  scen.shocks.push_back(std::move(shock));
  return scen;
}

DispatchDecision dispatch_units(std::map<std::string, int> units_by_type) {
  DispatchDecision d;
  for (const auto& [type, units] : units_by_type) {
    if (units > 0) d.dispatch.push_back({"node", "hub", type, units});
  }
  d.stabilized["node"] = true;
  return d;
}

std::vector<double> trapezoid(double peak, double slew, int steps) {
  std::vector<double> p;
  for (int t = 0; t < steps; ++t) {
    const double v = std::min({slew * (t + 1), std::abs(peak), slew * (steps - t)});
    p.push_back(peak >= 0 ? v : -v);
  }
  return p;
}

}  // namespace

TEST_CASE("tracking: ample ratings leave no residual", "[tracking]") {
  const Instance inst = tracking_instance();
  // Peak 400, slew 200; 3 BESS units: P 600 >= 400, R 450 >= 200,
  // eta*E = 0.95*1500 = 1425 kWh >= profile energy (~366 kWh).
  const auto scen = scenario_with_profile(trapezoid(400.0, 200.0, 12), 5.0, {{"bess", 2}});
  const auto tr = simulate_tracking(dispatch_units({{"bess", 3}}), scen, inst);
  REQUIRE(tr.violations.empty());
  REQUIRE(tr.nodes.size() == 1);
  REQUIRE_THAT(tr.nodes[0].residual_unmet_kwh, Catch::Matchers::WithinAbs(0.0, 1e-9));
  for (std::size_t t = 0; t < tr.nodes[0].required_kw.size(); ++t) {
    REQUIRE_THAT(tr.nodes[0].delivered_kw[t],
                 Catch::Matchers::WithinAbs(tr.nodes[0].required_kw[t], 1e-9));
  }
}

TEST_CASE("tracking: zero units leaves the whole profile unmet", "[tracking]") {
  const Instance inst = tracking_instance();
  const auto profile = trapezoid(400.0, 200.0, 12);
  double energy = 0.0;
  for (double p : profile) energy += p * (5.0 / 60.0);
  const auto scen = scenario_with_profile(profile, 5.0, {{"bess", 2}});
  const auto tr = simulate_tracking(DispatchDecision{}, scen, inst);
  REQUIRE(tr.violations.empty());
  REQUIRE_THAT(tr.nodes[0].residual_unmet_kwh, Catch::Matchers::WithinAbs(energy, 1e-9));
  REQUIRE(tr.residual_total_kwh == tr.nodes[0].residual_unmet_kwh);
  const auto per_node = residual_to_metrics(tr);
  REQUIRE(per_node.at("node") == tr.nodes[0].residual_unmet_kwh);
}

TEST_CASE("tracking: one-step charge follows the SoC arithmetic", "[tracking]") {
  // 50 kWh stored, eta_ch 0.9, 10 kW charge over one 1-hour step -> 59 kWh.
  Instance inst = tracking_instance(60.0, 0.5);
  inst.fcm_types[0] = {"bess", FcmCategory::kBess, 200.0, 100.0, 0.9, 0.9, 150.0, 1.0, 15.0};
  const auto scen = scenario_with_profile({-10.0}, 60.0, {{"bess", 1}});
  const auto tr = simulate_tracking(dispatch_units({{"bess", 1}}), scen, inst);
  REQUIRE(tr.violations.empty());
  const auto& soc = tr.nodes[0].soc_kwh.at("BESS");
  REQUIRE(soc.size() == 2);
  REQUIRE(soc[0] == 50.0);
  REQUIRE_THAT(soc[1], Catch::Matchers::WithinAbs(59.0, 1e-12));
  REQUIRE(tr.nodes[0].delivered_kw[0] == -10.0);
}

TEST_CASE("tracking: drop absorption is limited by storage headroom", "[tracking]") {
  // Full storage cannot absorb anything.
  const Instance inst = tracking_instance(5.0, 1.0);
  const auto scen = scenario_with_profile(trapezoid(-300.0, 150.0, 6), 5.0, {{"bess", 2}});
  const auto tr = simulate_tracking(dispatch_units({{"bess", 2}}), scen, inst);
  REQUIRE(tr.violations.empty());
  REQUIRE(tr.nodes[0].residual_unmet_kwh > 0.0);
  for (double p : tr.nodes[0].delivered_kw) REQUIRE(p == 0.0);

  // Half-charged storage absorbs the same drop in full.
  const Instance half = tracking_instance(5.0, 0.5);
  const auto tr2 = simulate_tracking(dispatch_units({{"bess", 2}}), scen, half);
  REQUIRE(tr2.violations.empty());
  REQUIRE_THAT(tr2.nodes[0].residual_unmet_kwh, Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("tracking: property batch over random decisions and profiles", "[tracking]") {
  Rng rng(12021);
  for (int trial = 0; trial < 200; ++trial) {
    const double dt = rng.bernoulli(0.5) ? 5.0 : 15.0;
    Instance inst = tracking_instance(dt, rng.uniform(0.2, 1.0));
    const int steps = static_cast<int>(rng.uniform_int(2, 30));
    const double peak = rng.uniform(50.0, 900.0) * (rng.bernoulli(0.75) ? 1.0 : -1.0);
    const double slew = rng.uniform(0.2, 0.6) * std::abs(peak);
    auto profile = trapezoid(peak, slew, steps);
    const auto scen = scenario_with_profile(profile, dt, {{"bess", 2}, {"gen", 1}});

    std::map<std::string, int> units{{"bess", static_cast<int>(rng.uniform_int(0, 3))},
                                     {"gen", static_cast<int>(rng.uniform_int(0, 2))},
                                     {"dr", static_cast<int>(rng.uniform_int(0, 2))}};
    const auto tr = simulate_tracking(dispatch_units(units), scen, inst);
    REQUIRE(tr.violations.empty());
    const auto& nt = tr.nodes[0];
    const double dt_h = dt / 60.0;

    // Re-simulation oracle: recompute SoC recursion, ramp limits, bounds
    // and the residual from the per-category traces.
    double r_total = 0.0, p_total_cap = 0.0;
    for (const auto& type : inst.fcm_types) {
      const int n = units.at(type.id);
      r_total += n * type.unit_ramp_limit;
      p_total_cap += n * type.unit_power_rating;
    }
    double residual = 0.0;
    for (std::size_t t = 0; t < nt.required_kw.size(); ++t) {
      const double req = nt.required_kw[t];
      const double del = nt.delivered_kw[t];
      if (req >= 0.0) residual += std::max(req - del, 0.0) * dt_h;
      else residual += std::max(del - req, 0.0) * dt_h;
      REQUIRE(std::abs(del) <= p_total_cap + 1e-9);
      const double prev = t == 0 ? 0.0 : nt.delivered_kw[t - 1];
      REQUIRE(std::abs(del - prev) <= r_total + 1e-9);  // total ramp (Eq. 12 aggregate)
    }
    REQUIRE(nt.residual_unmet_kwh == residual);

    for (const auto& [cat, powers] : nt.delivered_by_category) {
      if (nt.soc_kwh.count(cat) == 0) continue;
      const auto& soc = nt.soc_kwh.at(cat);
      REQUIRE(soc.size() == powers.size() + 1);
      double e_max = 0.0, eta_ch = 1.0, eta_dis = 1.0;
      for (const auto& type : inst.fcm_types) {
        if (std::string(to_string(type.category)) != cat || units.at(type.id) == 0) continue;
        e_max += units.at(type.id) * type.unit_energy_rating;
        eta_ch = std::min(eta_ch, type.eta_ch);
        eta_dis = std::min(eta_dis, type.eta_dis);
      }
      double s = inst.initial_soc_fraction * e_max;
      double charged = 0.0, discharged = 0.0;
      REQUIRE(soc[0] == s);
      for (std::size_t t = 0; t < powers.size(); ++t) {
        const double p_dis = std::max(powers[t], 0.0);
        const double p_ch = std::max(-powers[t], 0.0);
        s = s + (eta_ch * p_ch - p_dis / eta_dis) * dt_h;
        REQUIRE(soc[t + 1] == s);  // recursion reproduced exactly
        REQUIRE(s >= -1e-9);
        REQUIRE(s <= e_max + 1e-9);
        charged += p_ch * dt_h;
        discharged += p_dis * dt_h;
      }
      // Energy conservation through the efficiency chain.
      REQUIRE(discharged <= eta_dis * (inst.initial_soc_fraction * e_max + eta_ch * charged) + 1e-6);
    }

    // Analytic sufficiency: ample power, ramp and energy imply zero
    // residual for surge profiles.
    if (peak > 0.0) {
      double energy = 0.0, max_slew = 0.0, prev = 0.0;
      for (double p : profile) {
        energy += p * dt_h;
        max_slew = std::max(max_slew, std::abs(p - prev));
        prev = p;
      }
      double e_avail = 0.0;
      for (const auto& type : inst.fcm_types) {
        if (is_storage(type.category)) e_avail += units.at(type.id) * type.unit_energy_rating;
      }
      e_avail *= inst.initial_soc_fraction;
      const bool storage_only = units.at("gen") == 0 && units.at("dr") == 0;
      if (p_total_cap >= peak && r_total >= max_slew &&
          (storage_only ? 0.95 * e_avail >= energy : true) && storage_only) {
        REQUIRE_THAT(nt.residual_unmet_kwh, Catch::Matchers::WithinAbs(0.0, 1e-9));
      }
    }
  }
}
