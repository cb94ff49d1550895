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

#include "ecpsim/fock.hpp"

namespace ecpsim {
namespace {

const ModeRef kAH{"a", Pol::H};
const ModeRef kAV{"a", Pol::V};
const ModeRef kBH{"b", Pol::H};

TEST(OccupationPattern, CountsAndOrderingAreCanonical) {
  const OccupationPattern p({{kBH, 1}, {kAH, 2}, {kAV, 0}});
  EXPECT_EQ(p.count(kAH), 2U);
  EXPECT_EQ(p.count(kAV), 0U);
  EXPECT_EQ(p.spatial_count("a"), 2U);
  EXPECT_EQ(p.total(), 3U);
  EXPECT_FALSE(p < OccupationPattern({{kAH, 2}, {kBH, 1}}));
  EXPECT_FALSE(OccupationPattern({{kAH, 2}, {kBH, 1}}) < p);
}

TEST(OccupationPattern, MergesRepeatedModes) {
  EXPECT_EQ(OccupationPattern({{kAH, 1}, {kAH, 1}}).count(kAH), 2U);
}

TEST(StateVector, PrunesTinyAmplitudes) {
  const StateVector s{{OccupationPattern::single(kAH), 1e-16}, {OccupationPattern::single(kBH), 0.5}};
  EXPECT_EQ(s.terms().size(), 1U);
  EXPECT_DOUBLE_EQ(s.norm_sq(), 0.25);
}

TEST(StateVector, AdditionCancelsExactly) {
  const auto a = StateVector::photon(kAH, 0.3);
  const auto b = StateVector::photon(kAH, -0.3);
  EXPECT_TRUE((a + b).empty());
}

TEST(StateVector, NormalizeZeroThrows) {
  EXPECT_THROW(StateVector{}.normalized(), DegenerateStateError);
}

TEST(StateVector, InnerProductConjugatesLeft) {
  const auto a = StateVector::photon(kAH, Amplitude{0.0, 1.0});
  const auto b = StateVector::photon(kAH, 1.0);
  const Amplitude ip = inner(a, b);
  EXPECT_NEAR(ip.real(), 0.0, 1e-15);
  EXPECT_NEAR(ip.imag(), -1.0, 1e-15);
}

TEST(StateVector, FidelityIgnoresGlobalPhaseAndScale) {
  const auto s = StateVector::photon(kAH, 0.6) + StateVector::photon(kAV, 0.8);
  const auto t = s.scaled(Amplitude{0.0, 3.0});
  EXPECT_NEAR(fidelity(s, t), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(s, StateVector::photon(kAH)), 0.36, 1e-15);
}

TEST(StateVector, TensorRejectsSharedModes) {
  const auto a = StateVector::photon(kAH);
  EXPECT_THROW(tensor(a, a), ModeCollisionError);
  const auto ab = tensor(a, StateVector::photon(kBH));
  EXPECT_EQ(ab.max_photons(), 2U);
}

TEST(StateVector, CanonicalTextIsStable) {
  const auto s = StateVector::photon(kBH, 0.5) + StateVector::photon(kAV, -0.5);
  EXPECT_EQ(s.to_canonical_text(), (StateVector::photon(kAV, -0.5) + StateVector::photon(kBH, 0.5)).to_canonical_text());
}

TEST(ModeTransform, RejectsNonIsometry) {
  ModeRules rules;
  rules[kAH] = {{kBH, 1.0}, {kAV, 1.0}};
  EXPECT_THROW(apply_mode_transform(StateVector::photon(kAH), rules), UnitarityError);
}

TEST(ModeTransform, TwoPhotonsInOneModeCarryBosonicFactor) {
  // |2_a> split evenly: 1/2 |2,0> - 1/sqrt(2) |1,1> + 1/2 |0,2>
  const ModeRef c1{"c1", Pol::H}, c2{"c2", Pol::H};
  ModeRules rules;
  rules[kAH] = {{c1, 1.0 / std::sqrt(2.0)}, {c2, -1.0 / std::sqrt(2.0)}};
  const auto out = apply_mode_transform(StateVector{{OccupationPattern::single(kAH, 2), 1.0}}, rules);
  EXPECT_NEAR(out.amplitude(OccupationPattern::single(c1, 2)).real(), 0.5, 1e-15);
  EXPECT_NEAR(out.amplitude(OccupationPattern({{c1, 1}, {c2, 1}})).real(), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(out.amplitude(OccupationPattern::single(c2, 2)).real(), 0.5, 1e-15);
}

TEST(Projection, ReportsAbsoluteProbability) {
  const auto s = StateVector::photon(kAH, 0.6) + StateVector::photon(kBH, 0.8);
  const auto pr = project_occupation(s, [](const OccupationPattern& p) { return p.spatial_count("a") == 1; });
  EXPECT_NEAR(pr.probability, 0.36, 1e-15);
  EXPECT_NEAR(pr.collapsed.norm_sq(), 1.0, 1e-15);
}

}  // namespace
}  // namespace ecpsim
