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

#include <cmath>

#include <gtest/gtest.h>

#include "ecpsim/formulas.hpp"

namespace ecpsim {
namespace {

TEST(Formulas, ArmProbabilities) {
  const auto e = EntanglementParams::from_alpha_sq(0.6);
  const auto p = PolarizationParams::from_gamma_sq(0.5);
  EXPECT_NEAR(formulas::p_plus(e, p), 0.36, 1e-15);
  EXPECT_NEAR(formulas::p_minus(e, p), 0.36, 1e-15);
  EXPECT_NEAR(formulas::p_branch_sum(e, p, 0.8), 0.576, 1e-15);
  EXPECT_NEAR(formulas::p_published_total(e), 0.48, 1e-15);
  EXPECT_NEAR(formulas::p_joint_predicted(e), 0.192, 1e-15);
}

TEST(Formulas, SeriesMatchesListedTerms) {
  const auto e = EntanglementParams::from_alpha_sq(0.6);
  const auto s = formulas::series(e, 1.0, 4);
  ASSERT_EQ(s.size(), 4U);
  // exact rationals of the first two terms
  EXPECT_NEAR(s[0].p_k, 0.48, 1e-15);
  EXPECT_NEAR(s[1].p_k, 2.0 * 0.0576 / 0.52, 1e-15);
  EXPECT_NEAR(s[2].p_k, 0.0822204599524187, 1e-15);
  EXPECT_NEAR(s[3].p_k, 0.0156311744313238, 1e-15);
  EXPECT_NEAR(s[3].p_total, s[0].p_k + s[1].p_k + s[2].p_k + s[3].p_k, 1e-15);
}

TEST(Formulas, SeriesBalancedInput) {
  // alpha = beta: every term is 2^-k scaled, P_2 = 0.25
  const auto s = formulas::series(EntanglementParams::from_alpha_sq(0.5), 1.0, 3);
  EXPECT_NEAR(s[0].p_k, 0.5, 1e-15);
  EXPECT_NEAR(s[1].p_k, 0.25, 1e-15);
  EXPECT_NEAR(s[2].p_k, 0.125, 1e-15);
}

TEST(Formulas, SeriesDoesNotUnderflowEarly) {
  const auto s = formulas::series(EntanglementParams::from_alpha_sq(0.5), 1.0, 40);
  EXPECT_GT(s.back().p_k, 0.0);
  EXPECT_NEAR(s.back().p_total, 1.0, 1e-11);
}

TEST(Formulas, SeriesZeroWhenUnentangled) {
  for (const auto& t : formulas::series(EntanglementParams::from_alpha_sq(1.0), 1.0, 3)) EXPECT_EQ(t.p_k, 0.0);
}

TEST(Schedule, BalancingTransmission) {
  const auto e = EntanglementParams::from_alpha_sq(0.6);
  EXPECT_DOUBLE_EQ(balancing_transmission(e, 1), 0.6);
  EXPECT_NEAR(balancing_transmission(e, 2), 0.36 / 0.52, 1e-15);
  EXPECT_NEAR(balancing_transmission(e, 3), std::pow(0.6, 4) / (std::pow(0.6, 4) + std::pow(0.4, 4)), 1e-15);
  EXPECT_THROW(balancing_transmission(EntanglementParams::from_alpha_sq(0.0), 2), ScheduleError);
  EXPECT_THROW(vbs_schedule(e, 0), ConfigurationError);
}

TEST(Params, RejectOutOfRange) {
  EXPECT_THROW(EntanglementParams::from_alpha_sq(-0.1), ParameterError);
  EXPECT_THROW(PolarizationParams::from_gamma_sq(1.1), ParameterError);
  EXPECT_DOUBLE_EQ(EntanglementParams::from_alpha_sq(0.6).swapped().alpha_sq(), 0.4);
}

}  // namespace
}  // namespace ecpsim
