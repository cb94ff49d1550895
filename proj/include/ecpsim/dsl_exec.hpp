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

// Executes a parsed circuit with the same element calls, in the same order,
// as the native protocol runners.
//
//   prepare  runs once from the vacuum. In branch accounting the state is
//            then split at the prepare-section PBS into the component with no
//            photon in its H output (the V arm) and the one with no photon in
//            its V output (the H arm).
//   round    runs once per round on every component of a lane. A contiguous
//            qnd block keeps the selected classes and sets the all-zero class
//            aside for `recycle`; a detect block heralds jointly with the flips
//            that follow it.
//   recycle  heralded survivors become the next round's components.
//   finish   runs on every corrected success output.
//
// Arms are the connected components of the mode graph once the split and
// merge PBS are removed; in branch accounting each lane runs its own arm's
// statements plus those touching neither arm.

#ifndef ECPSIM_DSL_EXEC_HPP
#define ECPSIM_DSL_EXEC_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecpsim/dsl.hpp"
#include "ecpsim/elements.hpp"
#include "ecpsim/errors.hpp"
#include "ecpsim/measurement.hpp"
#include "ecpsim/monte_carlo.hpp"
#include "ecpsim/params.hpp"
#include "ecpsim/protocols.hpp"

namespace ecpsim::dsl {

struct ExecOptions {
  AccountingMode accounting = AccountingMode::PaperBranch;
  int rounds = 1;
  double eta = 1.0;
  std::map<std::string, std::vector<double>> per_round;  // parameters that change every round
  std::optional<std::uint64_t> mc_trials;                  // set to sample instead of exact
  std::uint64_t mc_seed = 0;
};

namespace detail {

class ModeGraph {
 public:
  std::string find(const std::string& m) {
    auto it = parent_.find(m);
    if (it == parent_.end()) {
      parent_[m] = m;
      return m;
    }
    if (it->second == m) return m;
    const std::string root = find(it->second);
    parent_[m] = root;
    return root;
  }
  void join(const std::string& a, const std::string& b) { parent_[find(a)] = find(b); }

 private:
  std::map<std::string, std::string> parent_;
};

enum class Arm { Shared, V, H };

using List = std::vector<const Statement*>;

struct LanePlan {
  std::string name;
  std::optional<Pol> pol;
  List round, recycle, finish;
};

struct Plan {
  List prepare;
  const Statement* split = nullptr;
  std::string merge_out;
  std::vector<LanePlan> lanes;
  std::map<const Statement*, Arm> arm;
};

inline Plan make_plan(const CircuitDoc& doc, AccountingMode accounting) {
  Plan plan;
  const auto elements = doc.elements();
  for (const auto& [sec, s] : elements) {
    if (sec == Section::Prepare && s->is_split() && !plan.split) plan.split = s;
    if (s->is_merge() && plan.merge_out.empty()) plan.merge_out = s->port("out");
  }

  ModeGraph g;
  std::map<std::string, std::string> label_mode;
  for (const auto& [sec, s] : elements) {
    if (s->kind == Kind::Pbs) continue;
    const auto modes = s->modes();
    for (std::size_t i = 1; i < modes.size(); ++i) g.join(modes[0], modes[i]);
    if (s->kind == Kind::Source && !s->label.empty()) {
      auto [it, inserted] = label_mode.emplace(s->label, modes[0]);
      if (!inserted) g.join(modes[0], it->second);
    }
  }
  for (const auto& [sec, s] : elements) {
    Arm a = Arm::Shared;
    if (plan.split && s->kind != Kind::Pbs) {
      const std::string v = g.find(plan.split->port("outV"));
      const std::string h = g.find(plan.split->port("outH"));
      for (const auto& m : s->modes()) {
        const std::string r = g.find(m);
        if (r == v) a = Arm::V;
        if (r == h) a = Arm::H;
      }
    }
    plan.arm[s] = a;
  }

  auto lane = [&](std::string name, std::optional<Arm> only) {
    LanePlan l;
    l.name = std::move(name);
    if (only == Arm::V) l.pol = Pol::V;
    if (only == Arm::H) l.pol = Pol::H;
    for (const auto& [sec, s] : elements) {
      if (sec == Section::Prepare) continue;
      const Arm a = plan.arm.at(s);
      if (only && a != Arm::Shared && a != *only) continue;
      (sec == Section::Round ? l.round : sec == Section::Recycle ? l.recycle : l.finish).push_back(s);
    }
    return l;
  };
  for (const auto& [sec, s] : elements) {
    if (sec == Section::Prepare) plan.prepare.push_back(s);
  }
  if (plan.split && accounting == AccountingMode::PaperBranch) {
    plan.lanes.push_back(lane("plus", Arm::V));
    plan.lanes.push_back(lane("minus", Arm::H));
  } else {
    plan.lanes.push_back(lane(plan.split ? "joint" : "main", std::nullopt));
  }
  return plan;
}

inline double eval_at(const Statement& s, const Bindings& env) {
  double v = 0.0;
  try {
    v = evaluate(*s.expr, env);
  } catch (const BindingError& e) {
    throw BindingError("line " + std::to_string(s.line) + ": " + e.what());
  }
  if (!std::isfinite(v)) throw BindingError("line " + std::to_string(s.line) + ": expression is not finite");
  if (s.kind == Kind::Vbs && !(v >= 0.0 && v <= 1.0)) {
    throw BindingError("line " + std::to_string(s.line) + ": transmission " + format_number(v) +
                       " outside [0, 1] after binding");
  }
  return v;
}

/// Applies element statements from `i` until a qnd or detect statement or the
/// end of the list; returns where it stopped.
inline std::size_t run_plain(const List& list, std::size_t i, StateVector& s, const Bindings& env,
                             std::set<std::string>& emitted) {
  for (; i < list.size(); ++i) {
    const Statement& st = *list[i];
    switch (st.kind) {
      case Kind::Source: {
        if (!st.label.empty() && !emitted.insert(st.label).second) break;
        StateVector::Terms terms;
        for (const Statement* other : list) {
          if (other->kind != Kind::Source) continue;
          if (st.label.empty() ? other != &st : other->label != st.label) continue;
          const Amplitude amp = other->expr ? Amplitude{eval_at(*other, env)} : Amplitude{1.0};
          terms[OccupationPattern::single({other->names.front(), other->pol})] += amp;
        }
        s = tensor(s, StateVector(std::move(terms)));
        break;
      }
      case Kind::Pbs:
        s = st.is_split() ? apply_pbs(s, st.port("in"), st.port("outH"), st.port("outV"))
                          : merge_pbs(s, st.port("inH"), st.port("inV"), st.port("out"));
        break;
      case Kind::Vbs:
        s = apply_vbs(s, st.port("in"), st.port("reflect"), st.port("transmit"), eval_at(st, env));
        break;
      case Kind::Bs:
        s = apply_bs(s, st.port("in1"), st.port("in2"), st.port("out1"), st.port("out2"));
        break;
      case Kind::Qnd:
      case Kind::Detect:
        return i;
      case Kind::Flip:
        throw ConfigurationError("line " + std::to_string(st.line) + ": flip outside a detect block");
      default:
        break;
    }
  }
  return i;
}

struct DetectBlock {
  std::vector<DetectorGroup> groups;
  std::vector<FlipRule> flips;
  std::size_t next = 0;
};

inline DetectBlock detect_block(const List& list, std::size_t i) {
  DetectBlock b;
  for (; i < list.size() && list[i]->kind == Kind::Detect; ++i) b.groups.push_back({list[i]->label, list[i]->names});
  for (; i < list.size() && list[i]->kind == Kind::Flip; ++i) {
    b.flips.push_back({list[i]->port("when"), list[i]->port("mode")});
  }
  b.next = i;
  return b;
}

inline void require_plain_tail(const List& list, std::size_t i) {
  for (; i < list.size(); ++i) {
    if (list[i]->kind == Kind::Qnd || list[i]->kind == Kind::Detect) {
      throw ConfigurationError("line " + std::to_string(list[i]->line) +
                               ": only one qnd block and one detect block per section are supported");
    }
  }
}

struct Targets {
  std::optional<StateVector> lane;
  std::optional<StateVector> full;
};

inline double score(const StateVector& s, const std::optional<StateVector>& target) {
  return target ? fidelity(s, *target) : fidelity(s, s);
}

inline LaneRound run_round(const std::vector<StateVector>& inputs, const LanePlan& lane, const Bindings& env,
                           const Targets& targets) {
  LaneRound out;
  out.lane = lane.name;
  unsigned clicks = 0;
  for (const Statement* s : lane.round) clicks += s->kind == Kind::Detect ? 1U : 0U;
  out.clicks = clicks;
  const DetectorModel ideal = DetectorModel::analytic(1.0);

  auto finish = [&](StateVector st, double probability) {
    std::set<std::string> emitted;
    if (run_plain(lane.finish, 0, st, env, emitted) != lane.finish.size()) {
      throw ConfigurationError("qnd and detect are not allowed in the finish section");
    }
    SuccessOutput so;
    so.probability = probability;
    so.fidelity = score(st, targets.lane);
    so.full_fidelity = score(st, targets.full);
    so.state = std::move(st);
    out.p_success_raw += probability;
    out.successes.push_back(std::move(so));
  };

  for (const auto& input : inputs) {
    StateVector s = input;
    std::set<std::string> emitted;
    std::optional<StateVector> recycle;
    bool heralded = false;
    std::size_t i = 0;
    for (;;) {
      i = run_plain(lane.round, i, s, env, emitted);
      if (i == lane.round.size()) break;
      if (lane.round[i]->kind == Kind::Qnd) {
        StateVector keep = s;
        StateVector rec = s;
        bool recyclable = true;
        for (; i < lane.round.size() && lane.round[i]->kind == Kind::Qnd; ++i) {
          const Statement& q = *lane.round[i];
          keep = qnd_component(keep, q.port("a"), q.port("b"), q.select);
          rec = qnd_component(rec, q.port("a"), q.port("b"), 0);
          recyclable = recyclable && q.select != 0;
        }
        out.p_qnd_keep += keep.norm_sq();
        s = keep;
        if (recyclable) recycle = rec;
        continue;
      }
      const DetectBlock block = detect_block(lane.round, i);
      require_plain_tail(lane.round, block.next);
      for (const auto& o : herald(s, block.groups, block.flips, ideal)) {
        if (!o.success) continue;
        StateVector st = o.corrected();
        std::set<std::string> tail_emitted = emitted;
        run_plain(lane.round, block.next, st, env, tail_emitted);
        finish(std::move(st), o.probability);
      }
      heralded = true;
      break;
    }
    if (!heralded && !s.empty()) finish(s.normalized(), s.norm_sq());

    if (!recycle || recycle->empty() || lane.recycle.empty()) continue;
    StateVector r = *recycle;
    std::set<std::string> rec_emitted;
    const std::size_t j = run_plain(lane.recycle, 0, r, env, rec_emitted);
    if (j == lane.recycle.size()) {
      ecpsim::detail::absorb_component(out.recycled, r);
      continue;
    }
    if (lane.recycle[j]->kind != Kind::Detect) {
      throw ConfigurationError("line " + std::to_string(lane.recycle[j]->line) + ": qnd is not allowed in recycle");
    }
    const DetectBlock block = detect_block(lane.recycle, j);
    require_plain_tail(lane.recycle, block.next);
    for (const auto& o : herald(r, block.groups, block.flips, ideal)) {
      if (!o.success) continue;
      ecpsim::detail::absorb_component(out.recycled, o.corrected().scaled(std::sqrt(o.probability)));
    }
  }
  for (const auto& c : out.recycled) out.p_recycle += c.norm_sq();
  return out;
}

inline void check_bound(const CircuitDoc& doc, const Bindings& bindings, const ExecOptions& options) {
  for (const auto& s : doc.statements) {
    if (!s.expr) continue;
    std::set<std::string> used;
    collect_params(*s.expr, used);
    for (const auto& p : used) {
      if (bindings.count(p)) continue;
      auto it = options.per_round.find(p);
      if (it != options.per_round.end() && it->second.size() >= static_cast<std::size_t>(options.rounds)) continue;
      throw BindingError("line " + std::to_string(s.line) + ": unbound parameter '" + p + "'");
    }
  }
}

}  // namespace detail

/// Runs `doc` and reports it like the native runners do.
inline ProtocolReport execute(const CircuitDoc& doc, const Bindings& bindings, const ExecOptions& options = {}) {
  if (options.rounds < 1) throw ConfigurationError("rounds must be at least 1");
  detail::check_bound(doc, bindings, options);
  const detail::Plan plan = detail::make_plan(doc, options.accounting);

  ProtocolReport r;
  r.protocol = doc.name();
  r.accounting = options.accounting;
  if (auto it = bindings.find("alpha_sq"); it != bindings.end()) {
    r.alpha_sq = EntanglementParams::from_alpha_sq(it->second).alpha_sq();
  }
  std::optional<PolarizationParams> pol;
  if (auto it = bindings.find("gamma_sq"); it != bindings.end()) {
    pol = PolarizationParams::from_gamma_sq(it->second);
    r.gamma_sq = pol->gamma_sq();
  }

  r.eta_p = options.eta;
  std::optional<double> detect_eta;
  for (const auto& s : doc.statements) {
    if (s.kind != Kind::Detect || !s.eta) continue;
    if (detect_eta && *detect_eta != *s.eta) {
      throw ConfigurationError("line " + std::to_string(s.line) + ": detect groups disagree on eta");
    }
    detect_eta = s.eta;
  }
  if (detect_eta) r.eta_p = *detect_eta;
  DetectorModel::validate_eta(r.eta_p);

  // targets
  detail::Targets full;
  std::vector<detail::Targets> lane_targets(plan.lanes.size());
  const auto outputs = doc.output_modes();
  if (pol) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(outputs.size()));
    StateVector::Terms terms;
    for (const auto& m : outputs) {
      terms[OccupationPattern::single({m, Pol::H})] = pol->gamma * norm;
      terms[OccupationPattern::single({m, Pol::V})] = pol->delta * norm;
    }
    full.full = StateVector(std::move(terms));
    for (std::size_t l = 0; l < plan.lanes.size(); ++l) {
      lane_targets[l].full = full.full;
      lane_targets[l].lane = full.full;
      if (plan.lanes[l].pol && !plan.merge_out.empty()) {
        const ModeRef excluded{plan.merge_out, other(*plan.lanes[l].pol)};
        lane_targets[l].lane = full.full->filtered([&](const OccupationPattern& q) { return q.count(excluded) == 0; });
      }
    }
  }
  r.fidelity_target = !pol ? "self" : plan.lanes.front().pol ? "arm" : "full";

  // prepare and fork
  StateVector prepared = StateVector::vacuum();
  std::set<std::string> emitted;
  if (detail::run_plain(plan.prepare, 0, prepared, bindings, emitted) != plan.prepare.size()) {
    throw ConfigurationError("qnd and detect are not allowed in the prepare section");
  }
  std::vector<std::vector<StateVector>> inputs;
  for (const auto& lane : plan.lanes) {
    StateVector in = prepared;
    if (lane.pol) {
      const std::string& away = *lane.pol == Pol::V ? plan.split->port("outH") : plan.split->port("outV");
      in = prepared.filtered([&](const OccupationPattern& q) { return q.spatial_count(away) == 0; });
    }
    inputs.push_back(in.empty() ? std::vector<StateVector>{} : std::vector{in});
  }

  for (int k = 1; k <= options.rounds; ++k) {
    Bindings env = bindings;
    for (const auto& [name, values] : options.per_round) env[name] = values.at(static_cast<std::size_t>(k - 1));

    RoundTrace rt;
    rt.k = k;
    std::optional<double> t_plus, t_minus;
    for (const auto& [sec, s] : doc.elements()) {
      if (sec != Section::Round || s->kind != Kind::Vbs) continue;
      const double t = detail::eval_at(*s, env);
      const detail::Arm a = plan.arm.at(s);
      if (a != detail::Arm::H && !t_plus) t_plus = t;
      if (a != detail::Arm::V && !t_minus) t_minus = t;
    }
    if (t_plus) r.schedule.plus.push_back(*t_plus);
    if (t_minus) r.schedule.minus.push_back(*t_minus);
    rt.t_plus = t_plus.value_or(0.0);
    rt.t_minus = t_minus.value_or(0.0);

    for (std::size_t l = 0; l < plan.lanes.size(); ++l) {
      LaneRound lr = detail::run_round(inputs[l], plan.lanes[l], env, lane_targets[l]);
      inputs[l] = lr.recycled;
      rt.lanes.push_back(std::move(lr));
    }
    r.trace.rounds.push_back(std::move(rt));
  }
  finalize_exact(r);
  if (options.mc_trials) r = with_monte_carlo(std::move(r), *options.mc_trials, options.mc_seed);
  return r;
}

}  // namespace ecpsim::dsl

#endif  // ECPSIM_DSL_EXEC_HPP
