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

#include "ecpsim/monte_carlo.hpp"
#include "ecpsim/report.hpp"
#include "ecpsim/sweep.hpp"

namespace ecpsim {
namespace {

const auto kE = EntanglementParams::from_alpha_sq(0.6);
const auto kP = PolarizationParams::from_gamma_sq(0.5);

TEST(Seeds, StreamsDiffer) {
  EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
  EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
  EXPECT_EQ(stream_seed(5, 9), stream_seed(5, 9));
}

TEST(MonteCarlo, WithinErrorOfExact) {
  const auto exact = run_ecp2(kE, kP, vbs_schedule(kE, 3), 3, AccountingMode::PaperBranch, DetectorModel::analytic(0.8));
  const auto mc = with_monte_carlo(exact, 200000, 12345);
  EXPECT_TRUE(mc.engine.monte_carlo);
  EXPECT_GT(mc.engine.std_error, 0.0);
  EXPECT_LT(std::abs(mc.p_total - exact.p_total), 5.0 * mc.engine.std_error);
}

TEST(MonteCarlo, IndependentOfThreadCount) {
  const auto exact = run_ecp2(kE, kP, vbs_schedule(kE, 2), 2, AccountingMode::JointCoherent, DetectorModel::analytic(0.9));
  const auto one = to_json_text(with_monte_carlo(exact, 30000, 99, 1));
  EXPECT_EQ(one, to_json_text(with_monte_carlo(exact, 30000, 99, 4)));
  EXPECT_EQ(one, to_json_text(with_monte_carlo(exact, 30000, 99, 0)));
  EXPECT_NE(one, to_json_text(with_monte_carlo(exact, 30000, 100, 1)));
}

TEST(MonteCarlo, ZeroTrialsRejected) {
  const auto exact = run_stripped(Protocol::Ecp2, kE, 1, DetectorModel::analytic(1.0));
  EXPECT_THROW(with_monte_carlo(exact, 0, 1), ConfigurationError);
}

TEST(MonteCarlo, CertainFailureHasZeroError) {
  const auto exact = run_stripped(Protocol::Ecp1, EntanglementParams::from_alpha_sq(1.0), 1, DetectorModel::analytic(1.0));
  const auto mc = with_monte_carlo(exact, 5000, 1);
  EXPECT_EQ(mc.p_total, 0.0);
  EXPECT_EQ(mc.engine.std_error, 0.0);
}

TEST(Sweep, GridLandsOnDecimals) {
  const auto g = sweep_grid(0.05, 0.95, 0.05);
  ASSERT_EQ(g.size(), 19U);
  EXPECT_EQ(g[2], 0.15);
  EXPECT_EQ(g.back(), 0.95);
  EXPECT_THROW(sweep_grid(0.0, 0.5, 0.1), ConfigurationError);
  EXPECT_THROW(sweep_grid(0.1, 0.5, 0.0), ConfigurationError);
}

TEST(Sweep, ExactRowsFollowFormula) {
  SweepSpec spec;
  spec.start = 0.2;
  spec.stop = 0.8;
  spec.step = 0.3;
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 9U);
  for (const auto& r : rows) EXPECT_NEAR(r.p_total_sim, r.p_total_formula, 1e-12);
  const auto csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,alpha_sq,eta,k,p_total_formula,p_total_sim,stderr");
}

TEST(Sweep, MonteCarloIndependentOfThreads) {
  SweepSpec spec;
  spec.step = 0.15;
  spec.mc_trials = 4000;
  spec.mc_seed = 8;
  spec.threads = 1;
  const auto a = sweep_csv(run_sweep(spec));
  spec.threads = 3;
  EXPECT_EQ(a, sweep_csv(run_sweep(spec)));
}

}  // namespace
}  // namespace ecpsim
