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

namespace ecpsim {
namespace {

ModeRef h(const char* s) { return {s, Pol::H}; }
ModeRef v(const char* s) { return {s, Pol::V}; }

const double kR = 1.0 / std::sqrt(2.0);

TEST(BeamSplitter, SinglePhotonSignConvention) {
  const auto a = apply_bs(StateVector::photon(h("i1")), "i1", "i2", "o1", "o2");
  EXPECT_NEAR(a.amplitude(OccupationPattern::single(h("o1"))).real(), kR, 1e-15);
  EXPECT_NEAR(a.amplitude(OccupationPattern::single(h("o2"))).real(), -kR, 1e-15);
  const auto b = apply_bs(StateVector::photon(v("i2")), "i1", "i2", "o1", "o2");
  EXPECT_NEAR(b.amplitude(OccupationPattern::single(v("o1"))).real(), kR, 1e-15);
  EXPECT_NEAR(b.amplitude(OccupationPattern::single(v("o2"))).real(), kR, 1e-15);
}

TEST(BeamSplitter, HongOuMandelBunching) {
  const auto in = tensor(StateVector::photon(h("i1")), StateVector::photon(h("i2")));
  const auto out = apply_bs(in, "i1", "i2", "o1", "o2");
  EXPECT_EQ(out.terms().size(), 2U);
  EXPECT_NEAR(out.amplitude(OccupationPattern::single(h("o1"), 2)).real(), kR, 1e-15);
  EXPECT_NEAR(out.amplitude(OccupationPattern::single(h("o2"), 2)).real(), -kR, 1e-15);
}

TEST(BeamSplitter, OrthogonalPolarizationsDoNotInterfere) {
  const auto in = tensor(StateVector::photon(h("i1")), StateVector::photon(v("i2")));
  const auto out = apply_bs(in, "i1", "i2", "o1", "o2");
  EXPECT_EQ(out.terms().size(), 4U);
  EXPECT_NEAR(out.norm_sq(), 1.0, 1e-14);
}

TEST(BeamSplitter, SymmetricFaultChangesPhases) {
  fault_injection::ScopedSymmetricBs fault;
  const auto a = apply_bs(StateVector::photon(h("i1")), "i1", "i2", "o1", "o2");
  EXPECT_NEAR(a.amplitude(OccupationPattern::single(h("o2"))).imag(), kR, 1e-15);
}

TEST(BeamSplitter, RejectsRepeatedPorts) {
  EXPECT_THROW(apply_bs(StateVector::photon(h("a")), "a", "a", "o1", "o2"), PortContractError);
}

TEST(VariableBeamSplitter, SplitsByTransmission) {
  const auto out = apply_vbs(StateVector::photon(v("in")), "in", "r", "t", 0.3);
  EXPECT_NEAR(std::norm(out.amplitude(OccupationPattern::single(v("r")))), 0.7, 1e-15);
  EXPECT_NEAR(std::norm(out.amplitude(OccupationPattern::single(v("t")))), 0.3, 1e-15);
}

TEST(VariableBeamSplitter, EndpointsAndRange) {
  EXPECT_EQ(apply_vbs(StateVector::photon(h("in")), "in", "r", "t", 0.0).terms().size(), 1U);
  EXPECT_EQ(apply_vbs(StateVector::photon(h("in")), "in", "r", "t", 1.0).terms().size(), 1U);
  EXPECT_THROW(apply_vbs(StateVector::photon(h("in")), "in", "r", "t", 1.2), ParameterError);
  EXPECT_THROW(apply_vbs(StateVector::photon(h("in")), "in", "r", "t", std::nan("")), ParameterError);
}

TEST(PolarizingBeamSplitter, RoutesByPolarization) {
  const auto s = StateVector::photon(h("in"), 0.6) + StateVector::photon(v("in"), 0.8);
  const auto out = apply_pbs(s, "in", "oh", "ov");
  EXPECT_NEAR(out.amplitude(OccupationPattern::single(h("oh"))).real(), 0.6, 1e-15);
  EXPECT_NEAR(out.amplitude(OccupationPattern::single(v("ov"))).real(), 0.8, 1e-15);
}

TEST(PolarizingBeamSplitter, MergeRejectsWrongPolarization) {
  EXPECT_THROW(merge_pbs(StateVector::photon(v("ih")), "ih", "iv", "out"), PortContractError);
  const auto ok = merge_pbs(StateVector::photon(v("iv")), "ih", "iv", "out");
  EXPECT_NEAR(ok.amplitude(OccupationPattern::single(v("out"))).real(), 1.0, 1e-15);
}

TEST(PhaseFlip, NegatesOddOccupationOnly) {
  const auto s = StateVector::photon(h("m"), 0.6) + StateVector::photon(h("x"), 0.8);
  const auto f = apply_phase_flip(s, "m");
  EXPECT_NEAR(f.amplitude(OccupationPattern::single(h("m"))).real(), -0.6, 1e-15);
  EXPECT_NEAR(f.amplitude(OccupationPattern::single(h("x"))).real(), 0.8, 1e-15);
  const auto two = StateVector{{OccupationPattern::single(h("m"), 2), 1.0}};
  EXPECT_NEAR(apply_phase_flip(two, "m").amplitude(OccupationPattern::single(h("m"), 2)).real(), 1.0, 1e-15);
}

}  // namespace
}  // namespace ecpsim
