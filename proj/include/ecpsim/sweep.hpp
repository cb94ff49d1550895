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

// Total success probability over an alpha^2 grid for several round counts.

#ifndef ECPSIM_SWEEP_HPP
#define ECPSIM_SWEEP_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecpsim/errors.hpp"
#include "ecpsim/formulas.hpp"
#include "ecpsim/monte_carlo.hpp"
#include "ecpsim/parallel.hpp"
#include "ecpsim/protocols.hpp"

namespace ecpsim {

struct SweepSpec {
  double start = 0.05;
  double stop = 0.95;
  double step = 0.05;
  double eta = 0.8;
  std::vector<int> ks{1, 3, 5};
  std::optional<double> gamma_sq;  // unset: polarization-free reference run
  std::optional<std::uint64_t> mc_trials;
  std::uint64_t mc_seed = 0;
  unsigned threads = 0;
};

struct SweepRow {
  double alpha = 0.0;
  double alpha_sq = 0.0;
  double eta = 0.0;
  int k = 0;
  double p_total_formula = 0.0;
  double p_total_sim = 0.0;
  double stderr_sim = 0.0;
};

/// Grid points start, start + step, ... up to stop, rounded to 1e-12 so
/// that accumulated steps land on their decimal values.
inline std::vector<double> sweep_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw ConfigurationError("grid step must be positive");
  if (!(start > 0.0 && stop < 1.0 && start <= stop)) throw ConfigurationError("grid must lie inside (0, 1)");
  std::vector<double> g;
  for (long i = 0;; ++i) {
    const double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
    if (v > stop + 1e-12) break;
    g.push_back(v);
  }
  return g;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  for (int k : spec.ks) {
    if (k < 1) throw ConfigurationError("k values must be at least 1");
  }
  DetectorModel::validate_eta(spec.eta);
  const auto grid = sweep_grid(spec.start, spec.stop, spec.step);
  std::vector<SweepRow> rows(grid.size() * spec.ks.size());
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        const double a2 = grid[i / spec.ks.size()];
        const int k = spec.ks[i % spec.ks.size()];
        const auto e = EntanglementParams::from_alpha_sq(a2);
        const auto model = DetectorModel::analytic(spec.eta);
        ProtocolReport r = spec.gamma_sq ? run_ecp2(e, PolarizationParams::from_gamma_sq(*spec.gamma_sq),
                                                    vbs_schedule(e, k), k, AccountingMode::PaperBranch, model)
                                         : run_stripped(Protocol::Ecp2, e, k, model);
        if (spec.mc_trials) r = with_monte_carlo(std::move(r), *spec.mc_trials, stream_seed(spec.mc_seed, i), 1);
        SweepRow& row = rows[i];
        row.alpha = std::sqrt(a2);
        row.alpha_sq = a2;
        row.eta = spec.eta;
        row.k = k;
        row.p_total_formula = formulas::series(e, spec.eta, k).back().p_total;
        row.p_total_sim = r.p_total;
        row.stderr_sim = r.engine.std_error;
      },
      spec.threads);
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  auto num = [](double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  std::string out = "alpha,alpha_sq,eta,k,p_total_formula,p_total_sim,stderr\n";
  for (const auto& r : rows) {
    out += num(r.alpha) + "," + num(r.alpha_sq) + "," + num(r.eta) + "," + std::to_string(r.k) + "," +
           num(r.p_total_formula) + "," + num(r.p_total_sim) + "," + num(r.stderr_sim) + "\n";
  }
  return out;
}

}  // namespace ecpsim

#endif  // ECPSIM_SWEEP_HPP
