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

// Native runners for the linear-optics protocol (ecp1) and the repeatable
// cross-Kerr protocol (ecp2).
//
// Both protocols share one topology. PBS1 sends the V part of Bob's photon to
// the "plus" arm (b2) and the H part to the "minus" arm (b3). Each arm mixes
// its signal mode with an auxiliary photon on a 50:50 BS after a VBS. The
// cross-Kerr protocol inserts a QND parity check before the BS; the |dn| = 0
// outcome is recycled through a second BS into the next round. PBS2 merges
// the two arm outputs b6 (V) and b9 (H) into b10.
//
// Accounting modes:
//   branch  each arm runs on its own unnormalized PBS component with one
//           auxiliary photon; arm results are added.
//   joint   the full state runs through both arms at once with both auxiliary
//           photons; success needs one click in every detector pair.
//
// States are carried unnormalized, so squared norms are absolute
// probabilities of the branch history that produced them.

#ifndef ECPSIM_PROTOCOLS_HPP
#define ECPSIM_PROTOCOLS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecpsim/elements.hpp"
#include "ecpsim/errors.hpp"
#include "ecpsim/fock.hpp"
#include "ecpsim/formulas.hpp"
#include "ecpsim/measurement.hpp"
#include "ecpsim/params.hpp"

namespace ecpsim {

enum class Protocol { Ecp1, Ecp2 };

inline std::string to_string(Protocol p) { return p == Protocol::Ecp1 ? "ecp1" : "ecp2"; }

namespace wiring {
inline const std::string kAlice = "a1";
inline const std::string kBobInput = "b1";
inline const std::string kOutput = "b10";
}  // namespace wiring

/// Mode names of one arm.
struct ArmWiring {
  std::string name;
  Pol pol = Pol::V;          // polarization PBS1 routes into the arm
  std::string port;          // signal mode after PBS1
  std::string aux_in;        // auxiliary photon source
  std::string aux_reflect;   // VBS reflected output, mixed with `port`
  std::string aux_transmit;  // VBS transmitted output, sent to PBS2
  std::string det_plus;      // success BS output for which no correction is needed
  std::string det_minus;     // success BS output that prescribes a flip of aux_transmit
  std::string rec_plus;      // recycling BS outputs (cross-Kerr protocol only)
  std::string rec_minus;
};

inline ArmWiring plus_arm() { return {"plus", Pol::V, "b2", "b4", "b5", "b6", "d1", "d2", "d3", "d4"}; }

inline ArmWiring minus_arm(Protocol protocol) {
  if (protocol == Protocol::Ecp1) return {"minus", Pol::H, "b3", "b7", "b8", "b9", "d3", "d4", "", ""};
  return {"minus", Pol::H, "b3", "b7", "b8", "b9", "d5", "d6", "d7", "d8"};
}

/// alpha gamma |1_H>a1 + alpha delta |1_V>a1 + beta gamma |1_H>b1 + beta delta |1_V>b1
inline StateVector prepare_initial(const EntanglementParams& e, const PolarizationParams& p) {
  e.validate();
  p.validate();
  StateVector::Terms terms;
  terms[OccupationPattern::single({wiring::kAlice, Pol::H})] = e.alpha * p.gamma;
  terms[OccupationPattern::single({wiring::kAlice, Pol::V})] = e.alpha * p.delta;
  terms[OccupationPattern::single({wiring::kBobInput, Pol::H})] = e.beta * p.gamma;
  terms[OccupationPattern::single({wiring::kBobInput, Pol::V})] = e.beta * p.delta;
  return StateVector(std::move(terms));
}

/// (|1,0> + |0,1>)/sqrt2 on (a1, b10) carrying gamma|H> + delta|V>.
inline StateVector concentration_target(const PolarizationParams& p) {
  const double r = 1.0 / std::sqrt(2.0);
  StateVector::Terms terms;
  for (const auto& m : {wiring::kAlice, wiring::kOutput}) {
    terms[OccupationPattern::single({m, Pol::H})] = p.gamma * r;
    terms[OccupationPattern::single({m, Pol::V})] = p.delta * r;
  }
  return StateVector(std::move(terms));
}

/// The target restricted to what a single arm can populate: Alice's photon in
/// either polarization, or the output photon in the arm's polarization.
inline StateVector arm_target(const PolarizationParams& p, Pol arm_pol) {
  const ModeRef excluded{wiring::kOutput, other(arm_pol)};
  return concentration_target(p).filtered([&](const OccupationPattern& q) { return q.count(excluded) == 0; });
}

/// A set of arms simulated together on one chain of states.
struct Lane {
  std::string name;
  std::vector<ArmWiring> arms;
};

struct SuccessOutput {
  double probability = 0.0;  // raw, before detector efficiency
  double fidelity = 0.0;     // against the lane target
  double full_fidelity = 0.0;
  StateVector state;         // corrected and merged, normalized
};

struct LaneRound {
  std::string lane;
  unsigned clicks = 1;
  double p_success_raw = 0.0;
  double p_qnd_keep = 0.0;
  double p_recycle = 0.0;
  std::vector<SuccessOutput> successes;
  std::vector<StateVector> recycled;  // unnormalized next-round inputs

  double weighted_fidelity() const {
    double num = 0.0;
    for (const auto& s : successes) num += s.probability * s.fidelity;
    return p_success_raw > 0.0 ? num / p_success_raw : 0.0;
  }
  double min_fidelity() const {
    double f = 1.0;
    for (const auto& s : successes) f = std::min(f, s.fidelity);
    return f;
  }
};

struct RoundTrace {
  int k = 0;
  double t_plus = 0.0;
  double t_minus = 0.0;
  std::vector<LaneRound> lanes;
};

struct ExactTrace {
  std::vector<RoundTrace> rounds;
};

struct RoundReport {
  int k = 0;
  double t = 0.0;
  double t_minus = 0.0;
  double p_success = 0.0;
  double p_fail_recyclable = 0.0;
  std::optional<double> heralded_fidelity;
  std::vector<std::pair<std::string, double>> lanes;  // per-lane p_success
};

struct EngineInfo {
  bool monte_carlo = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double std_error = 0.0;
};

struct Comparison {
  std::string name;
  double paper_value = 0.0;
  double simulated_value = 0.0;
  double delta() const { return simulated_value - paper_value; }
};

struct ProtocolReport {
  std::string protocol;
  AccountingMode accounting = AccountingMode::PaperBranch;
  std::optional<double> alpha_sq;
  std::optional<double> gamma_sq;
  double eta_p = 1.0;
  VbsSchedule schedule;
  std::vector<RoundReport> rounds;
  double p_total = 0.0;
  EngineInfo engine;
  std::string fidelity_target;  // "arm", "full" or "self"
  std::vector<Comparison> paper_comparison;
  ExactTrace trace;  // not serialized
};

namespace detail {

/// Adds `c` to a mixture, folding it into a component that describes the same
/// pure state up to a global phase. Such components are one physical state
/// reached through different heralds.
inline void absorb_component(std::vector<StateVector>& mixture, StateVector c) {
  if (c.empty()) return;
  for (auto& m : mixture) {
    if (fidelity(m, c) >= 1.0 - kTolerance) {
      const double w = m.norm_sq();
      m = m.scaled(std::sqrt((w + c.norm_sq()) / w));
      return;
    }
  }
  mixture.push_back(std::move(c));
}

inline std::vector<DetectorGroup> success_groups(const Lane& lane) {
  std::vector<DetectorGroup> g;
  for (const auto& a : lane.arms) g.push_back({a.name, {a.det_plus, a.det_minus}});
  return g;
}

inline std::vector<FlipRule> success_flips(const Lane& lane) {
  std::vector<FlipRule> f;
  for (const auto& a : lane.arms) f.push_back({a.det_minus, a.aux_transmit});
  return f;
}

inline std::vector<DetectorGroup> recycle_groups(const Lane& lane) {
  std::vector<DetectorGroup> g;
  for (const auto& a : lane.arms) g.push_back({a.name, {a.rec_plus, a.rec_minus}});
  return g;
}

inline std::vector<FlipRule> recycle_flips(const Lane& lane) {
  std::vector<FlipRule> f;
  for (const auto& a : lane.arms) f.push_back({a.rec_minus, a.port});
  return f;
}

struct RoundContext {
  double t_plus = 0.0;
  double t_minus = 0.0;
  bool qnd = false;
  StateVector target;
  StateVector full_target;
};

/// Records a heralded success: merges the corrected residual at PBS2 and
/// scores it against the lane target.
inline void record_success(LaneRound& out, const HeraldOutcome& o, const RoundContext& ctx) {
  StateVector merged = merge_pbs(o.corrected(), "b9", "b6", wiring::kOutput);
  SuccessOutput s;
  s.probability = o.probability;
  s.fidelity = fidelity(merged, ctx.target);
  s.full_fidelity = fidelity(merged, ctx.full_target);
  s.state = std::move(merged);
  out.p_success_raw += o.probability;
  out.successes.push_back(std::move(s));
}

/// One concentration round of one lane over every component of `inputs`.
inline LaneRound run_lane_round(const std::vector<StateVector>& inputs, const Lane& lane, const RoundContext& ctx) {
  LaneRound out;
  out.lane = lane.name;
  out.clicks = static_cast<unsigned>(lane.arms.size());
  const DetectorModel ideal = DetectorModel::analytic(1.0);
  for (const auto& input : inputs) {
    StateVector s = input;
    for (const auto& a : lane.arms) {
      s = tensor(s, StateVector::photon({a.aux_in, a.pol}));
      s = apply_vbs(s, a.aux_in, a.aux_reflect, a.aux_transmit, a.pol == Pol::V ? ctx.t_plus : ctx.t_minus);
    }

    StateVector keep = s;
    StateVector recycle;
    if (ctx.qnd) {
      recycle = s;
      for (const auto& a : lane.arms) {
        keep = qnd_component(keep, a.port, a.aux_reflect, 1);
        recycle = qnd_component(recycle, a.port, a.aux_reflect, 0);
      }
      out.p_qnd_keep += keep.norm_sq();
    }

    for (const auto& a : lane.arms) keep = apply_bs(keep, a.port, a.aux_reflect, a.det_plus, a.det_minus);
    for (const auto& o : herald(keep, success_groups(lane), success_flips(lane), ideal)) {
      if (o.success) record_success(out, o, ctx);
    }

    if (!ctx.qnd || recycle.empty()) continue;
    for (const auto& a : lane.arms) recycle = apply_bs(recycle, a.aux_reflect, a.aux_transmit, a.rec_plus, a.rec_minus);
    for (const auto& o : herald(recycle, recycle_groups(lane), recycle_flips(lane), ideal)) {
      if (!o.success) continue;
      absorb_component(out.recycled, o.corrected().scaled(std::sqrt(o.probability)));
    }
  }
  for (const auto& c : out.recycled) out.p_recycle += c.norm_sq();
  return out;
}

struct LaneStart {
  Lane lane;
  StateVector input;
  StateVector target;
};

/// Splits the prepared state at PBS1 into the lanes of the accounting mode.
inline std::vector<LaneStart> lane_starts(Protocol protocol, const EntanglementParams& e,
                                          const PolarizationParams& p, AccountingMode accounting) {
  const StateVector split = apply_pbs(prepare_initial(e, p), wiring::kBobInput, "b3", "b2");
  const ArmWiring plus = plus_arm();
  const ArmWiring minus = minus_arm(protocol);
  if (accounting == AccountingMode::JointCoherent) {
    return {{Lane{"joint", {plus, minus}}, split, concentration_target(p)}};
  }
  auto without = [&](const std::string& spatial) {
    return split.filtered([&](const OccupationPattern& q) { return q.spatial_count(spatial) == 0; });
  };
  return {{Lane{"plus", {plus}}, without(minus.port), arm_target(p, Pol::V)},
          {Lane{"minus", {minus}}, without(plus.port), arm_target(p, Pol::H)}};
}

inline ExactTrace run_lanes(const std::vector<LaneStart>& starts, const VbsSchedule& schedule, int rounds, bool qnd,
                            const PolarizationParams& p) {
  ExactTrace trace;
  std::vector<std::vector<StateVector>> inputs;
  for (const auto& s : starts) inputs.push_back(s.input.empty() ? std::vector<StateVector>{} : std::vector{s.input});
  const StateVector full = concentration_target(p);
  for (int k = 1; k <= rounds; ++k) {
    RoundTrace r;
    r.k = k;
    r.t_plus = schedule.plus.at(static_cast<std::size_t>(k - 1));
    r.t_minus = schedule.minus.at(static_cast<std::size_t>(k - 1));
    for (std::size_t i = 0; i < starts.size(); ++i) {
      RoundContext ctx{r.t_plus, r.t_minus, qnd, starts[i].target, full};
      LaneRound lr = run_lane_round(inputs[i], starts[i].lane, ctx);
      inputs[i] = lr.recycled;
      r.lanes.push_back(std::move(lr));
    }
    trace.rounds.push_back(std::move(r));
  }
  return trace;
}

}  // namespace detail

/// Closed-form values next to their simulated counterparts.
inline std::vector<Comparison> closed_form_comparison(const ProtocolReport& r) {
  std::vector<Comparison> out;
  if (!r.alpha_sq) return out;
  const auto e = EntanglementParams::from_alpha_sq(*r.alpha_sq);
  const double eta = r.eta_p;
  auto lane_value = [&](std::size_t round, const std::string& lane) -> std::optional<double> {
    if (round >= r.rounds.size()) return std::nullopt;
    for (const auto& [name, v] : r.rounds[round].lanes) {
      if (name == lane) return v;
    }
    return std::nullopt;
  };
  const bool branch = r.accounting == AccountingMode::PaperBranch;
  if (r.gamma_sq && !r.rounds.empty()) {
    const auto p = PolarizationParams::from_gamma_sq(*r.gamma_sq);
    if (branch) {
      if (auto v = lane_value(0, "plus")) out.push_back({"p_plus_closed_form", formulas::p_plus(e, p, eta), *v});
      if (auto v = lane_value(0, "minus")) out.push_back({"p_minus_closed_form", formulas::p_minus(e, p, eta), *v});
      out.push_back({"p_branch_sum_closed_form", formulas::p_branch_sum(e, p, eta), r.rounds[0].p_success});
    } else {
      out.push_back({"p_joint_predicted", formulas::p_joint_predicted(e, eta, 2), r.rounds[0].p_success});
    }
    out.push_back({"p_published_total", formulas::p_published_total(e, eta), r.rounds[0].p_success});
  }
  if (r.protocol != "ecp1") {
    const auto series = formulas::series(e, eta, static_cast<int>(r.rounds.size()));
    for (std::size_t i = 0; i < r.rounds.size(); ++i) {
      out.push_back({"p_round_" + std::to_string(i + 1) + "_series", series[i].p_k, r.rounds[i].p_success});
    }
    if (!series.empty()) out.push_back({"p_total_series", series.back().p_total, r.p_total});
  }
  return out;
}

/// Fills the exact-engine report fields from a trace.
inline void finalize_exact(ProtocolReport& r) {
  r.rounds.clear();
  r.p_total = 0.0;
  for (const auto& rt : r.trace.rounds) {
    RoundReport rr;
    rr.k = rt.k;
    rr.t = rt.t_plus;
    rr.t_minus = rt.t_minus;
    double raw = 0.0;
    double fid = 0.0;
    for (const auto& l : rt.lanes) {
      const double p = l.p_success_raw * std::pow(r.eta_p, static_cast<double>(l.clicks));
      rr.lanes.emplace_back(l.lane, p);
      rr.p_success += p;
      rr.p_fail_recyclable += l.p_recycle;
      raw += l.p_success_raw;
      fid += l.p_success_raw * l.weighted_fidelity();
    }
    if (raw > 0.0) rr.heralded_fidelity = fid / raw;
    r.p_total += rr.p_success;
    r.rounds.push_back(std::move(rr));
  }
  r.engine = EngineInfo{};
  r.paper_comparison = closed_form_comparison(r);
}

/// Linear-optics protocol: one round, no recycling.
inline ProtocolReport run_ecp1(const EntanglementParams& e, const PolarizationParams& p, double t1, double t2,
                               AccountingMode accounting, const DetectorModel& model) {
  for (double t : {t1, t2}) {
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("VBS transmission outside [0, 1]");
  }
  ProtocolReport r;
  r.protocol = "ecp1";
  r.accounting = accounting;
  r.alpha_sq = e.alpha_sq();
  r.gamma_sq = p.gamma_sq();
  r.eta_p = model.eta_p;
  r.schedule = VbsSchedule{{t1}, {t2}};
  r.fidelity_target = accounting == AccountingMode::PaperBranch ? "arm" : "full";
  r.trace = detail::run_lanes(detail::lane_starts(Protocol::Ecp1, e, p, accounting), r.schedule, 1, false, p);
  finalize_exact(r);
  return r;
}

/// Cross-Kerr protocol repeated for `max_rounds` rounds.
inline ProtocolReport run_ecp2(const EntanglementParams& e, const PolarizationParams& p, const VbsSchedule& schedule,
                               int max_rounds, AccountingMode accounting, const DetectorModel& model) {
  if (max_rounds < 1) throw ConfigurationError("max_rounds must be at least 1");
  if (schedule.rounds() < static_cast<std::size_t>(max_rounds)) {
    throw ConfigurationError("VBS schedule has " + std::to_string(schedule.rounds()) + " entries for " +
                             std::to_string(max_rounds) + " rounds");
  }
  ProtocolReport r;
  r.protocol = "ecp2";
  r.accounting = accounting;
  r.alpha_sq = e.alpha_sq();
  r.gamma_sq = p.gamma_sq();
  r.eta_p = model.eta_p;
  r.schedule = VbsSchedule{{schedule.plus.begin(), schedule.plus.begin() + max_rounds},
                           {schedule.minus.begin(), schedule.minus.begin() + max_rounds}};
  r.fidelity_target = accounting == AccountingMode::PaperBranch ? "arm" : "full";
  r.trace = detail::run_lanes(detail::lane_starts(Protocol::Ecp2, e, p, accounting), r.schedule, max_rounds, true, p);
  finalize_exact(r);
  return r;
}

/// Polarization-free reference run: the photon is H, so only the minus arm
/// carries it. For ecp2 the per-round results follow the closed-form series.
inline ProtocolReport run_stripped(Protocol protocol, const EntanglementParams& e, int rounds,
                                   const DetectorModel& model) {
  const auto p = PolarizationParams::from_gamma_sq(1.0);
  if (protocol == Protocol::Ecp1) rounds = 1;
  ProtocolReport r;
  r.protocol = to_string(protocol) + "-stripped";
  r.accounting = AccountingMode::PaperBranch;
  r.alpha_sq = e.alpha_sq();
  r.eta_p = model.eta_p;
  r.schedule = protocol == Protocol::Ecp1 ? VbsSchedule{{e.alpha_sq()}, {e.alpha_sq()}} : vbs_schedule(e, rounds);
  r.fidelity_target = "arm";
  auto starts = detail::lane_starts(protocol, e, p, AccountingMode::PaperBranch);
  starts.erase(starts.begin());  // the plus arm never sees the H photon
  r.trace = detail::run_lanes(starts, r.schedule, rounds, protocol == Protocol::Ecp2, p);
  finalize_exact(r);
  return r;
}

}  // namespace ecpsim

#endif  // ECPSIM_PROTOCOLS_HPP
