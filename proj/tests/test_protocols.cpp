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

#include "ecpsim/protocols.hpp"

namespace ecpsim {
namespace {

// Reference values from the first-quantized path enumeration at
// alpha^2 = 0.6, gamma^2 = 0.5, ideal detectors.
constexpr double kBranchRounds[] = {0.72, 0.332307692307692, 0.123330689928628, 0.0234467616469858,
                                    0.000913465421456880};
constexpr double kJointRounds[] = {0.192, 0.0408994082840237, 0.00563350336232273, 0.000203611345085393,
                                   3.0904410229532e-07};

const auto kE = EntanglementParams::from_alpha_sq(0.6);
const auto kP = PolarizationParams::from_gamma_sq(0.5);
const auto kIdeal = DetectorModel::analytic(1.0);

TEST(InitialState, NormalizedWithExpectedTerms) {
  const auto s = prepare_initial(kE, kP);
  EXPECT_NEAR(s.norm_sq(), 1.0, 1e-15);
  EXPECT_EQ(s.terms().size(), 4U);
}

TEST(Ecp1, BranchArms) {
  const auto r = run_ecp1(kE, kP, 0.6, 0.6, AccountingMode::PaperBranch, kIdeal);
  ASSERT_EQ(r.rounds.size(), 1U);
  EXPECT_NEAR(r.p_total, 0.72, 1e-12);
  ASSERT_EQ(r.rounds[0].lanes.size(), 2U);
  EXPECT_NEAR(r.rounds[0].lanes[0].second, 0.36, 1e-12);
  EXPECT_NEAR(r.rounds[0].lanes[1].second, 0.36, 1e-12);
  EXPECT_NEAR(*r.rounds[0].heralded_fidelity, 1.0, 1e-12);
}

TEST(Ecp1, BranchArmsAsymmetricPolarization) {
  const auto p = PolarizationParams::from_gamma_sq(0.2);
  const auto r = run_ecp1(kE, p, 0.6, 0.6, AccountingMode::PaperBranch, kIdeal);
  EXPECT_EQ(r.rounds[0].lanes[0].first, "plus");
  EXPECT_NEAR(r.rounds[0].lanes[0].second, 0.24 * 1.8, 1e-12);
  EXPECT_NEAR(r.rounds[0].lanes[1].second, 0.24 * 1.2, 1e-12);
}

TEST(Ecp1, JointRun) {
  const auto r = run_ecp1(kE, kP, 0.6, 0.6, AccountingMode::JointCoherent, kIdeal);
  EXPECT_NEAR(r.p_total, 0.192, 1e-12);
  EXPECT_NEAR(*r.rounds[0].heralded_fidelity, 1.0, 1e-12);
  const auto balanced = run_ecp1(EntanglementParams::from_alpha_sq(0.5), kP, 0.5, 0.5,
                                 AccountingMode::JointCoherent, kIdeal);
  EXPECT_NEAR(balanced.p_total, 0.25, 1e-12);
}

TEST(Ecp1, EfficiencyPerClick) {
  const auto branch = run_ecp1(kE, kP, 0.6, 0.6, AccountingMode::PaperBranch, DetectorModel::analytic(0.8));
  EXPECT_NEAR(branch.p_total, 0.72 * 0.8, 1e-12);
  const auto joint = run_ecp1(kE, kP, 0.6, 0.6, AccountingMode::JointCoherent, DetectorModel::analytic(0.8));
  EXPECT_NEAR(joint.p_total, 0.192 * 0.64, 1e-12);
}

TEST(Ecp1, RejectsBadTransmission) {
  EXPECT_THROW(run_ecp1(kE, kP, 1.2, 0.6, AccountingMode::PaperBranch, kIdeal), ParameterError);
}

TEST(Ecp2, BranchRoundsMatchReference) {
  const auto r = run_ecp2(kE, kP, vbs_schedule(kE, 5), 5, AccountingMode::PaperBranch, kIdeal);
  ASSERT_EQ(r.rounds.size(), 5U);
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(r.rounds[k].p_success, kBranchRounds[k], 1e-12 * std::max(1.0, kBranchRounds[k])) << "k=" << k + 1;
    EXPECT_NEAR(*r.rounds[k].heralded_fidelity, 1.0, 1e-12);
  }
}

TEST(Ecp2, JointRoundsMatchReference) {
  const auto r = run_ecp2(kE, kP, vbs_schedule(kE, 5), 5, AccountingMode::JointCoherent, kIdeal);
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(r.rounds[k].p_success, kJointRounds[k], 1e-12) << "k=" << k + 1;
  }
}

TEST(Ecp2, ProbabilityIsConserved) {
  // success + recyclable + discarded never exceeds the input weight
  const auto r = run_ecp2(kE, kP, vbs_schedule(kE, 4), 4, AccountingMode::PaperBranch, kIdeal);
  for (std::size_t k = 1; k < r.rounds.size(); ++k) {
    EXPECT_LE(r.rounds[k].p_success + r.rounds[k].p_fail_recyclable, r.rounds[k - 1].p_fail_recyclable + 1e-12);
  }
}

TEST(Ecp2, ScheduleShorterThanRoundsIsRejected) {
  EXPECT_THROW(run_ecp2(kE, kP, vbs_schedule(kE, 2), 3, AccountingMode::PaperBranch, kIdeal), ConfigurationError);
}

TEST(Stripped, MatchesSeries) {
  const auto r = run_stripped(Protocol::Ecp2, kE, 4, kIdeal);
  EXPECT_EQ(r.protocol, "ecp2-stripped");
  const double expected[] = {0.48, 0.221538461538462, 0.0822204599524187, 0.0156311744313238};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(r.rounds[k].p_success, expected[k], 1e-12);
}

TEST(Stripped, UnentangledInputNeverSucceeds) {
  const auto one = EntanglementParams::from_alpha_sq(1.0);
  EXPECT_EQ(run_stripped(Protocol::Ecp1, one, 1, kIdeal).p_total, 0.0);
  // the balancing schedule has no meaning here
  EXPECT_THROW(run_stripped(Protocol::Ecp2, one, 2, kIdeal), ScheduleError);
}

TEST(Comparison, ClosedFormsReported) {
  const auto r = run_ecp1(kE, kP, 0.6, 0.6, AccountingMode::PaperBranch, kIdeal);
  bool saw_published = false;
  for (const auto& c : r.paper_comparison) {
    if (c.name == "p_published_total") {
      saw_published = true;
      EXPECT_NEAR(c.paper_value, 0.48, 1e-15);
      EXPECT_NEAR(c.delta(), 0.24, 1e-12);
    }
  }
  EXPECT_TRUE(saw_published);
}

}  // namespace
}  // namespace ecpsim
