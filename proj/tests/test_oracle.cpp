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

#include "ecpsim/oracle.hpp"

namespace ecpsim {
namespace {

TEST(Enumerate, HongOuMandel) {
  using namespace oracle;
  const ModeRef a{"i1", Pol::H}, b{"i2", Pol::H};
  Step bs;
  bs.route = [](const ModeRef& m) { return oracle::detail::bs_route(m, "i1", "i2", "o1", "o2"); };
  const auto amps = enumerate_paths({Photon{{{a, 1.0}}}, Photon{{{b, 1.0}}}}, {bs});
  double coincidence = 0.0;
  for (const auto& [p, amp] : amps) {
    if (p.spatial_count("o1") == 1) coincidence += std::norm(amp);
  }
  EXPECT_NEAR(coincidence, 0.0, 1e-15);
  EXPECT_NEAR(amps.at(OccupationPattern::single({"o1", Pol::H}, 2)).real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Enumerate, WeightStepFilters) {
  using namespace oracle;
  Step keep_o1;
  keep_o1.weight = [](const Config& c) { return c.front().spatial == "o1" ? Amplitude{1.0} : Amplitude{}; };
  const auto amps = enumerate_paths({Photon{{{{"o1", Pol::H}, 0.6}, {{"o2", Pol::H}, 0.8}}}}, {keep_o1});
  ASSERT_EQ(amps.size(), 1U);
  EXPECT_NEAR(amps.begin()->second.real(), 0.6, 1e-15);
}

TEST(Enumerate, PhotonBudget) {
  using namespace oracle;
  const Photon p{{{{"x", Pol::H}, 1.0}}};
  EXPECT_THROW(enumerate_paths({p, p, p, p}, {}), UnsupportedInstanceError);
}

struct Case {
  double alpha_sq;
  double gamma_sq;
  Protocol protocol;
  AccountingMode accounting;
  int rounds;
};

class OracleVsEngine : public ::testing::TestWithParam<Case> {};

TEST_P(OracleVsEngine, RoundsAgree) {
  const auto c = GetParam();
  const auto e = EntanglementParams::from_alpha_sq(c.alpha_sq);
  const auto p = PolarizationParams::from_gamma_sq(c.gamma_sq);
  const auto ideal = DetectorModel::analytic(1.0);
  const auto sched = c.protocol == Protocol::Ecp1 ? VbsSchedule{{c.alpha_sq}, {c.alpha_sq}} : vbs_schedule(e, c.rounds);
  const auto r = c.protocol == Protocol::Ecp1 ? run_ecp1(e, p, c.alpha_sq, c.alpha_sq, c.accounting, ideal)
                                               : run_ecp2(e, p, sched, c.rounds, c.accounting, ideal);
  const auto o = oracle::oracle_enumerate(e, p, {c.protocol, c.accounting, sched.plus, sched.minus, c.rounds, false});
  ASSERT_EQ(o.rounds.size(), r.rounds.size());
  for (std::size_t k = 0; k < r.rounds.size(); ++k) {
    EXPECT_NEAR(r.rounds[k].p_success, o.p_success(k), 1e-12) << "round " << k + 1;
    for (const auto& lane : o.rounds[k]) {
      for (const auto& [prob, out] : lane.outputs) {
        const auto target = c.accounting == AccountingMode::JointCoherent
                                ? concentration_target(p)
                                : arm_target(p, lane.lane == "plus" ? Pol::V : Pol::H);
        if (prob > 1e-14) {
          EXPECT_NEAR(fidelity(out, target), 1.0, 1e-12);
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Grid, OracleVsEngine,
    ::testing::Values(Case{0.6, 0.5, Protocol::Ecp1, AccountingMode::PaperBranch, 1},
                      Case{0.3, 0.8, Protocol::Ecp1, AccountingMode::PaperBranch, 1},
                      Case{0.3, 0.8, Protocol::Ecp1, AccountingMode::JointCoherent, 1},
                      Case{0.6, 0.5, Protocol::Ecp2, AccountingMode::PaperBranch, 4},
                      Case{0.85, 0.1, Protocol::Ecp2, AccountingMode::PaperBranch, 3},
                      Case{0.4, 0.7, Protocol::Ecp2, AccountingMode::JointCoherent, 3}));

}  // namespace
}  // namespace ecpsim
