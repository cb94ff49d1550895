// Copyright 2026 The ecpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stable JSON form of a ProtocolReport. Field order is fixed.

#ifndef ECPSIM_REPORT_HPP
#define ECPSIM_REPORT_HPP

#include <string>

#include "json.hpp"

#include "ecpsim/params.hpp"
#include "ecpsim/protocols.hpp"

namespace ecpsim {

inline nlohmann::ordered_json to_json(const ProtocolReport& r) {
  using nlohmann::ordered_json;
  auto optional = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };

  ordered_json j;
  j["protocol"] = r.protocol;
  j["accounting"] = to_string(r.accounting);
  j["alpha_sq"] = optional(r.alpha_sq);
  j["gamma_sq"] = optional(r.gamma_sq);
  j["eta_p"] = r.eta_p;
  j["schedule"] = ordered_json{{"plus", r.schedule.plus}, {"minus", r.schedule.minus}};

  ordered_json rounds = ordered_json::array();
  for (const auto& rr : r.rounds) {
    ordered_json x;
    x["k"] = rr.k;
    x["t"] = rr.t;
    x["t_minus"] = rr.t_minus;
    x["p_success"] = rr.p_success;
    x["p_fail_recyclable"] = rr.p_fail_recyclable;
    x["heralded_fidelity"] = optional(rr.heralded_fidelity);
    ordered_json lanes = ordered_json::object();
    for (const auto& [name, p] : rr.lanes) lanes[name] = p;
    x["lanes"] = lanes;
    rounds.push_back(x);
  }
  j["rounds"] = rounds;
  j["p_total"] = r.p_total;
  j["engine"] = r.engine.monte_carlo ? "monte_carlo" : "exact";
  j["seed"] = r.engine.monte_carlo ? ordered_json(r.engine.seed) : ordered_json(nullptr);
  j["trials"] = r.engine.monte_carlo ? ordered_json(r.engine.trials) : ordered_json(nullptr);
  j["stderr"] = r.engine.monte_carlo ? ordered_json(r.engine.std_error) : ordered_json(nullptr);

  ordered_json cmp = ordered_json::object();
  for (const auto& c : r.paper_comparison) {
    cmp[c.name] = ordered_json{{"paper_value", c.paper_value}, {"simulated_value", c.simulated_value},
                               {"delta", c.delta()}};
  }
  j["paper_comparison"] = cmp;
  j["fidelity_target"] = r.fidelity_target;
  return j;
}

inline std::string to_json_text(const ProtocolReport& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace ecpsim

#endif  // ECPSIM_REPORT_HPP
