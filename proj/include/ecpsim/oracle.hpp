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

// Independent ground truth by first-quantized path enumeration.
//
// Every photon is tracked individually. A history picks one output for each
// photon at every element and carries the product of the element
// coefficients. Histories are never merged along the way; amplitudes are
// summed only once, per final occupation pattern, where the bosonic factor
// sqrt(prod n!) converts the ordered photon tuple into a Fock amplitude.
// Measurements that are diagonal in the occupation basis (QND classes, click
// patterns, parity flips) act per history on its configuration.
//
// The oracle keeps its own wiring tables and coefficients and never calls the
// mode-transform engine.

#ifndef ECPSIM_ORACLE_HPP
#define ECPSIM_ORACLE_HPP

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ecpsim/errors.hpp"
#include "ecpsim/fock.hpp"
#include "ecpsim/params.hpp"
#include "ecpsim/protocols.hpp"

namespace ecpsim::oracle {

using Route = std::vector<std::pair<ModeRef, Amplitude>>;

/// One photon in a superposition of modes (unnormalized alternatives).
struct Photon {
  Route alternatives;
};

using Config = std::vector<ModeRef>;  // position of photon i

struct Step {
  std::function<Route(const ModeRef&)> route;     // per photon; unset means identity
  std::function<Amplitude(const Config&)> weight;  // per history; unset means 1
};

namespace detail {

inline double sqrt_factorial_product(const OccupationPattern& p) {
  double f = 1.0;
  for (const auto& [m, n] : p.entries()) {
    for (unsigned k = 2; k <= n; ++k) f *= static_cast<double>(k);
  }
  return std::sqrt(f);
}

inline OccupationPattern pattern_of(const Config& c) {
  std::vector<OccupationPattern::Entry> entries;
  for (const auto& m : c) entries.emplace_back(m, 1U);
  return OccupationPattern(std::move(entries));
}

}  // namespace detail

/// Sums every path history of `photons` through `steps` and returns the Fock
/// amplitudes of the final occupation patterns.
inline std::map<OccupationPattern, Amplitude> enumerate_paths(const std::vector<Photon>& photons,
                                                              const std::vector<Step>& steps,
                                                              unsigned max_photons = 3) {
  if (photons.size() > max_photons) {
    throw UnsupportedInstanceError("oracle supports at most " + std::to_string(max_photons) + " photons");
  }
  std::vector<std::pair<Config, Amplitude>> histories{{Config{}, Amplitude{1.0}}};
  for (const auto& ph : photons) {
    std::vector<std::pair<Config, Amplitude>> next;
    for (const auto& [c, a] : histories) {
      for (const auto& [m, coeff] : ph.alternatives) {
        Config c2 = c;
        c2.push_back(m);
        next.emplace_back(std::move(c2), a * coeff);
      }
    }
    histories = std::move(next);
  }
  for (const auto& step : steps) {
    std::vector<std::pair<Config, Amplitude>> next;
    for (const auto& [c, a] : histories) {
      if (step.weight) {
        const Amplitude w = step.weight(c);
        if (w != Amplitude{}) next.emplace_back(c, a * w);
        continue;
      }
      std::vector<std::pair<Config, Amplitude>> partial{{Config{}, a}};
      for (const auto& m : c) {
        const Route r = step.route ? step.route(m) : Route{{m, 1.0}};
        std::vector<std::pair<Config, Amplitude>> grown;
        for (const auto& [pc, pa] : partial) {
          for (const auto& [out, coeff] : r) {
            Config c2 = pc;
            c2.push_back(out);
            grown.emplace_back(std::move(c2), pa * coeff);
          }
        }
        partial = std::move(grown);
      }
      for (auto& h : partial) next.push_back(std::move(h));
    }
    histories = std::move(next);
  }
  std::map<OccupationPattern, Amplitude> out;
  for (const auto& [c, a] : histories) out[detail::pattern_of(c)] += a;
  for (auto& [p, a] : out) a *= detail::sqrt_factorial_product(p);
  return out;
}

/// Photon component of a single-photon state: unnormalized mode amplitudes.
using Component = Route;

struct LaneResult {
  std::string lane;
  unsigned clicks = 1;
  double p_success = 0.0;  // raw, no detector efficiency
  double p_qnd_keep = 0.0;
  double p_recycle = 0.0;
  std::map<std::string, double> click_patterns;       // success probability per click pattern
  std::vector<std::pair<double, StateVector>> outputs;  // (probability, normalized corrected output)
  std::vector<Component> recycled;
};

struct OracleConfig {
  Protocol protocol = Protocol::Ecp1;
  AccountingMode accounting = AccountingMode::PaperBranch;
  std::vector<double> t_plus;
  std::vector<double> t_minus;
  int rounds = 1;
  bool stripped = false;  // polarization-free run on the H arm only
};

struct OracleResult {
  std::vector<std::vector<LaneResult>> rounds;

  double p_success(std::size_t round) const {
    double p = 0.0;
    for (const auto& l : rounds.at(round)) p += l.p_success;
    return p;
  }
};

namespace detail {

struct Arm {
  std::string name;
  Pol pol;
  std::string signal, aux, reflect, transmit, click_plus, click_minus, rec_plus, rec_minus;
};

inline Arm arm_v() { return {"plus", Pol::V, "b2", "b4", "b5", "b6", "d1", "d2", "d3", "d4"}; }
inline Arm arm_h(bool cross_kerr) {
  if (cross_kerr) return {"minus", Pol::H, "b3", "b7", "b8", "b9", "d5", "d6", "d7", "d8"};
  return {"minus", Pol::H, "b3", "b7", "b8", "b9", "d3", "d4", "", ""};
}

inline unsigned spatial_in(const Config& c, const std::string& s) {
  unsigned n = 0;
  for (const auto& m : c) n += m.spatial == s ? 1U : 0U;
  return n;
}

inline unsigned spatial_in(const OccupationPattern& p, const std::string& s) { return p.spatial_count(s); }

/// Balanced splitter: first input -> (o1 - o2)/sqrt2, second -> (o1 + o2)/sqrt2.
inline Route bs_route(const ModeRef& m, const std::string& i1, const std::string& i2, const std::string& o1,
                      const std::string& o2) {
  const double r = 1.0 / std::sqrt(2.0);
  if (m.spatial == i1) return {{{o1, m.pol}, r}, {{o2, m.pol}, -r}};
  if (m.spatial == i2) return {{{o1, m.pol}, r}, {{o2, m.pol}, r}};
  return {{m, 1.0}};
}

struct Outcome {
  double probability = 0.0;
  bool success = false;
  std::string clicks;
  StateVector::Terms residual;
};

/// Splits final amplitudes by their polarization-resolved detector pattern.
inline std::map<OccupationPattern, Outcome> group_by_detectors(const std::map<OccupationPattern, Amplitude>& amps,
                                                               const std::vector<std::vector<std::string>>& groups) {
  auto is_det = [&](const std::string& s) {
    for (const auto& g : groups) {
      for (const auto& d : g) {
        if (d == s) return true;
      }
    }
    return false;
  };
  std::map<OccupationPattern, Outcome> out;
  for (const auto& [p, a] : amps) {
    const OccupationPattern det = p.restricted(is_det);
    const OccupationPattern rest = p.restricted([&](const std::string& s) { return !is_det(s); });
    auto& o = out[det];
    o.residual[rest] += a;
  }
  for (auto& [det, o] : out) {
    for (const auto& [r, a] : o.residual) o.probability += std::norm(a);
    o.success = true;
    for (const auto& g : groups) {
      unsigned n = 0;
      for (const auto& d : g) n += spatial_in(det, d);
      if (n != 1) o.success = false;
    }
    for (const auto& [m, n] : det.entries()) o.clicks += (o.clicks.empty() ? "" : ",") + m.spatial;
  }
  return out;
}

inline LaneResult run_lane(const std::vector<Component>& inputs, const std::vector<Arm>& arms, double t_plus,
                           double t_minus, bool cross_kerr) {
  LaneResult res;
  res.clicks = static_cast<unsigned>(arms.size());
  for (const auto& comp : inputs) {
    std::vector<Photon> photons{{comp}};
    for (const auto& arm : arms) photons.push_back({{{{arm.aux, arm.pol}, 1.0}}});

    std::vector<Step> vbs;
    for (const auto& arm : arms) {
      const double t = arm.pol == Pol::V ? t_plus : t_minus;
      vbs.push_back({[arm, t](const ModeRef& m) -> Route {
                       if (m.spatial != arm.aux) return {{m, 1.0}};
                       return {{{arm.reflect, m.pol}, std::sqrt(1.0 - t)}, {{arm.transmit, m.pol}, std::sqrt(t)}};
                     },
                     {}});
    }
    auto qnd_class = [arms](unsigned cls) {
      return Step{{}, [arms, cls](const Config& c) -> Amplitude {
                    for (const auto& arm : arms) {
                      const unsigned a = spatial_in(c, arm.signal);
                      const unsigned b = spatial_in(c, arm.reflect);
                      if ((a > b ? a - b : b - a) != cls) return 0.0;
                    }
                    return 1.0;
                  }};
    };

    // success path
    std::vector<Step> steps = vbs;
    if (cross_kerr) {
      steps.push_back(qnd_class(1));
      double keep = 0.0;
      for (const auto& [p, a] : enumerate_paths(photons, steps)) keep += std::norm(a);
      res.p_qnd_keep += keep;
    }
    std::vector<std::vector<std::string>> groups;
    for (const auto& arm : arms) {
      steps.push_back({[arm](const ModeRef& m) {
                         return bs_route(m, arm.signal, arm.reflect, arm.click_plus, arm.click_minus);
                       },
                       {}});
      groups.push_back({arm.click_plus, arm.click_minus});
    }
    steps.push_back({{}, [arms](const Config& c) -> Amplitude {
                       double sign = 1.0;
                       for (const auto& arm : arms) {
                         if (spatial_in(c, arm.click_minus) == 1 && spatial_in(c, arm.transmit) % 2 == 1) sign = -sign;
                       }
                       return sign;
                     }});
    steps.push_back({[](const ModeRef& m) -> Route {
                       if (m.spatial == "b6" || m.spatial == "b9") return {{{"b10", m.pol}, 1.0}};
                       return {{m, 1.0}};
                     },
                     {}});
    for (auto& [det, o] : group_by_detectors(enumerate_paths(photons, steps), groups)) {
      if (!o.success || o.probability == 0.0) continue;
      res.p_success += o.probability;
      res.click_patterns[o.clicks] += o.probability;
      const StateVector out(o.residual);
      if (!out.empty()) res.outputs.emplace_back(o.probability, out.normalized());
    }

    if (!cross_kerr) continue;
    // recycling path
    steps = vbs;
    steps.push_back(qnd_class(0));
    groups.clear();
    for (const auto& arm : arms) {
      steps.push_back({[arm](const ModeRef& m) {
                         return bs_route(m, arm.reflect, arm.transmit, arm.rec_plus, arm.rec_minus);
                       },
                       {}});
      groups.push_back({arm.rec_plus, arm.rec_minus});
    }
    steps.push_back({{}, [arms](const Config& c) -> Amplitude {
                       double sign = 1.0;
                       for (const auto& arm : arms) {
                         if (spatial_in(c, arm.rec_minus) == 1 && spatial_in(c, arm.signal) % 2 == 1) sign = -sign;
                       }
                       return sign;
                     }});
    for (auto& [det, o] : group_by_detectors(enumerate_paths(photons, steps), groups)) {
      if (!o.success || o.probability == 0.0) continue;
      Component next;
      for (const auto& [p, a] : o.residual) {
        if (p.total() != 1) throw UnsupportedInstanceError("recycled residual is not a single photon");
        next.emplace_back(p.entries().front().first, a);
      }
      res.p_recycle += o.probability;
      res.recycled.push_back(std::move(next));
    }
  }
  return res;
}

}  // namespace detail

/// Runs the protocol described by `config` by path enumeration, round by
/// round, feeding every recycled component into the next round unmerged.
inline OracleResult oracle_enumerate(const EntanglementParams& e, const PolarizationParams& pol,
                                     const OracleConfig& config) {
  if (config.rounds < 1) throw ConfigurationError("oracle needs at least one round");
  if (config.t_plus.size() < static_cast<std::size_t>(config.rounds) ||
      config.t_minus.size() < static_cast<std::size_t>(config.rounds)) {
    throw ConfigurationError("oracle schedule shorter than the round count");
  }
  const bool cross_kerr = config.protocol == Protocol::Ecp2;
  const PolarizationParams p = config.stripped ? PolarizationParams::from_gamma_sq(1.0) : pol;

  // PBS1: H transmitted to b3, V reflected to b2.
  const Component signal{{{"a1", Pol::H}, e.alpha * p.gamma},
                         {{"a1", Pol::V}, e.alpha * p.delta},
                         {{"b3", Pol::H}, e.beta * p.gamma},
                         {{"b2", Pol::V}, e.beta * p.delta}};
  auto without = [&](const std::string& spatial) {
    Component c;
    for (const auto& alt : signal) {
      if (alt.first.spatial != spatial && std::abs(alt.second) > 0.0) c.push_back(alt);
    }
    return c;
  };

  struct Lane {
    std::string name;
    std::vector<detail::Arm> arms;
    std::vector<Component> inputs;
  };
  std::vector<Lane> lanes;
  if (config.stripped) {
    lanes.push_back({"minus", {detail::arm_h(cross_kerr)}, {without("b2")}});
  } else if (config.accounting == AccountingMode::JointCoherent) {
    lanes.push_back({"joint", {detail::arm_v(), detail::arm_h(cross_kerr)}, {without("")}});
  } else {
    lanes.push_back({"plus", {detail::arm_v()}, {without("b3")}});
    lanes.push_back({"minus", {detail::arm_h(cross_kerr)}, {without("b2")}});
  }

  OracleResult result;
  for (int k = 0; k < config.rounds; ++k) {
    std::vector<LaneResult> round;
    for (auto& lane : lanes) {
      LaneResult r = detail::run_lane(lane.inputs, lane.arms, config.t_plus[k], config.t_minus[k], cross_kerr);
      r.lane = lane.name;
      lane.inputs = r.recycled;
      round.push_back(std::move(r));
    }
    result.rounds.push_back(std::move(round));
  }
  return result;
}

}  // namespace ecpsim::oracle

#endif  // ECPSIM_ORACLE_HPP
