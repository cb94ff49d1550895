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

#include "ecpsim/elements.hpp"
#include "ecpsim/measurement.hpp"

namespace ecpsim {
namespace {

ModeRef h(const char* s) { return {s, Pol::H}; }

TEST(Qnd, SelectsPhotonNumberDifference) {
  // (|1,0> + |1,1>) / sqrt(2): one term with |dn| = 1, one with 0
  const auto s = StateVector{{OccupationPattern::single(h("a")), 1.0},
                             {OccupationPattern({{h("a"), 1}, {h("b"), 1}}), 1.0}}
                     .scaled(1.0 / std::sqrt(2.0));
  const auto keep = qnd_select(s, "a", "b", 1);
  EXPECT_NEAR(keep.probability, 0.5, 1e-15);
  EXPECT_NEAR(qnd_component(s, "a", "b", 0).norm_sq(), 0.5, 1e-15);
  EXPECT_TRUE(qnd_component(s, "a", "b", 2).empty());
}

TEST(Herald, ExactlyOnePerGroup) {
  const auto s = apply_bs(tensor(StateVector::photon(h("x")), StateVector::photon(h("y"))), "x", "y", "d1", "d2");
  const auto out = herald(s, std::vector<std::string>{"d1", "d2"}, {}, DetectorModel::analytic(1.0));
  // HOM: only bunched patterns survive, none succeed
  EXPECT_EQ(out.size(), 2U);
  EXPECT_DOUBLE_EQ(success_probability(out), 0.0);
}

TEST(Herald, FlipAppliedOnMinusDetector) {
  // photon in d2 with a partner in r: the flip on r must act
  const auto s = StateVector{{OccupationPattern({{h("d2"), 1}, {h("r"), 1}}), 1.0}};
  const auto out = herald(s, std::vector<std::string>{"d1", "d2"}, {{"d2", "r"}}, DetectorModel::analytic(1.0));
  ASSERT_EQ(out.size(), 1U);
  ASSERT_TRUE(out[0].success);
  EXPECT_EQ(out[0].corrections, std::vector<std::string>{"r"});
  EXPECT_NEAR(out[0].corrected().amplitude(OccupationPattern::single(h("r"))).real(), -1.0, 1e-15);
}

TEST(Herald, EfficiencyScalesSuccessOnly) {
  const auto s = StateVector::photon(h("d1"), 0.6) + StateVector::photon(h("z"), 0.8);
  const auto out = herald(s, std::vector<std::string>{"d1"}, {}, DetectorModel::analytic(0.5, 2));
  EXPECT_NEAR(success_probability(out), 0.36 * 0.25, 1e-15);
  for (const auto& o : out) {
    if (!o.success) {
      EXPECT_NEAR(o.detected_probability, 0.64, 1e-15);
    }
  }
}

TEST(DetectorModel, RejectsBadEfficiency) {
  EXPECT_THROW(DetectorModel::analytic(1.5), ParameterError);
  EXPECT_THROW(DetectorModel::bernoulli(-0.1), ParameterError);
  EXPECT_DOUBLE_EQ(DetectorModel::analytic(0.8, 2).success_factor(), 0.64);
}

}  // namespace
}  // namespace ecpsim
