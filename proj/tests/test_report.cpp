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

#include <gtest/gtest.h>

#include "ecpsim/report.hpp"

namespace ecpsim {
namespace {

TEST(Report, FieldOrderAndValues) {
  const auto e = EntanglementParams::from_alpha_sq(0.6);
  const auto r = run_ecp2(e, PolarizationParams::from_gamma_sq(0.5), vbs_schedule(e, 2), 2,
                          AccountingMode::PaperBranch, DetectorModel::analytic(0.8));
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"protocol", "accounting", "alpha_sq", "gamma_sq", "eta_p", "schedule",
                                            "rounds", "p_total", "engine", "seed", "trials", "stderr",
                                            "paper_comparison", "fidelity_target"}));
  EXPECT_EQ(j["protocol"], "ecp2");
  EXPECT_EQ(j["accounting"], "branch");
  EXPECT_EQ(j["alpha_sq"], 0.6);
  EXPECT_EQ(j["engine"], "exact");
  EXPECT_EQ(j["rounds"].size(), 2U);
  EXPECT_EQ(j["rounds"][0]["t"], 0.6);
  EXPECT_NEAR(j["rounds"][0]["p_success"].get<double>(), 0.72 * 0.8, 1e-12);
  EXPECT_NEAR(j["rounds"][0]["lanes"]["plus"].get<double>(), 0.36 * 0.8, 1e-12);
}

TEST(Report, StrippedRunHasNullGamma) {
  const auto r = run_stripped(Protocol::Ecp2, EntanglementParams::from_alpha_sq(0.5), 1, DetectorModel::analytic(1.0));
  const auto j = to_json(r);
  EXPECT_TRUE(j["gamma_sq"].is_null());
  EXPECT_EQ(j["protocol"], "ecp2-stripped");
}

TEST(Report, TextEndsWithNewline) {
  const auto r = run_stripped(Protocol::Ecp1, EntanglementParams::from_alpha_sq(0.5), 1, DetectorModel::analytic(1.0));
  const auto text = to_json_text(r);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_NEAR(nlohmann::json::parse(text)["p_total"].get<double>(), 0.5, 1e-15);
}

}  // namespace
}  // namespace ecpsim
