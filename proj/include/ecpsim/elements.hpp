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

// The optical elements of the concentration setups, as mode transforms.
//
// Conventions are fixed:
//   BS   in1 -> (out1 - out2)/sqrt2,  in2 -> (out1 + out2)/sqrt2
//   VBS  in  -> sqrt(1-t) reflect + sqrt(t) transmit  (real, no reflection phase)
//   PBS  H is transmitted, V is reflected; merge is the same map read backwards.
// The heralded phase corrections depend on the BS signs.

#ifndef ECPSIM_ELEMENTS_HPP
#define ECPSIM_ELEMENTS_HPP

#include <atomic>
#include <cmath>
#include <map>
#include <string>
#include <string_view>

#include "ecpsim/errors.hpp"
#include "ecpsim/fock.hpp"

namespace ecpsim {

namespace fault_injection {
/// When set, apply_bs uses the symmetric (i-phase) convention instead of the
/// real +/- one. Only the verification harness touches this.
inline std::atomic<bool> symmetric_bs_phase{false};

class ScopedSymmetricBs {
 public:
  ScopedSymmetricBs() : previous_(symmetric_bs_phase.exchange(true)) {}
  ~ScopedSymmetricBs() { symmetric_bs_phase.store(previous_); }
  ScopedSymmetricBs(const ScopedSymmetricBs&) = delete;
  ScopedSymmetricBs& operator=(const ScopedSymmetricBs&) = delete;

 private:
  bool previous_;
};
}  // namespace fault_injection

namespace detail {

inline void require_distinct(std::initializer_list<std::string_view> ports, const char* element) {
  for (auto i = ports.begin(); i != ports.end(); ++i) {
    if (i->empty()) throw PortContractError(std::string(element) + ": empty port name");
    for (auto j = std::next(i); j != ports.end(); ++j) {
      if (*i == *j) throw PortContractError(std::string(element) + ": port " + std::string(*i) + " bound twice");
    }
  }
}

inline ModeRef mode(std::string_view spatial, Pol pol) { return ModeRef{std::string(spatial), pol}; }

}  // namespace detail

/// PBS split: H photons of `in` go to `out_h`, V photons to `out_v`.
inline StateVector apply_pbs(const StateVector& s, std::string_view in, std::string_view out_h,
                             std::string_view out_v) {
  detail::require_distinct({in, out_h, out_v}, "pbs");
  ModeRules rules;
  rules[detail::mode(in, Pol::H)] = {{detail::mode(out_h, Pol::H), 1.0}};
  rules[detail::mode(in, Pol::V)] = {{detail::mode(out_v, Pol::V), 1.0}};
  return apply_mode_transform(s, rules);
}

/// PBS merge: the H input and the V input recombine into one spatial mode.
/// A wrong polarization at either input would be lost by a real PBS, so it
/// is rejected.
inline StateVector merge_pbs(const StateVector& s, std::string_view in_h, std::string_view in_v,
                             std::string_view out) {
  detail::require_distinct({in_h, in_v, out}, "pbs merge");
  for (const auto& m : s.modes()) {
    if ((m.spatial == in_h && m.pol != Pol::H) || (m.spatial == in_v && m.pol != Pol::V)) {
      throw PortContractError("pbs merge: " + to_string(m) + " carries the wrong polarization for its input");
    }
  }
  ModeRules rules;
  rules[detail::mode(in_h, Pol::H)] = {{detail::mode(out, Pol::H), 1.0}};
  rules[detail::mode(in_v, Pol::V)] = {{detail::mode(out, Pol::V), 1.0}};
  return apply_mode_transform(s, rules);
}

/// 50:50 beam splitter; each polarization transforms independently.
inline StateVector apply_bs(const StateVector& s, std::string_view in1, std::string_view in2,
                            std::string_view out1, std::string_view out2) {
  detail::require_distinct({in1, in2}, "bs");
  detail::require_distinct({out1, out2}, "bs");
  const double r = 1.0 / std::sqrt(2.0);
  const bool symmetric = fault_injection::symmetric_bs_phase.load();
  const Amplitude i_r{0.0, r};
  ModeRules rules;
  for (Pol p : {Pol::H, Pol::V}) {
    if (symmetric) {
      rules[detail::mode(in1, p)] = {{detail::mode(out1, p), r}, {detail::mode(out2, p), i_r}};
      rules[detail::mode(in2, p)] = {{detail::mode(out1, p), i_r}, {detail::mode(out2, p), r}};
    } else {
      rules[detail::mode(in1, p)] = {{detail::mode(out1, p), r}, {detail::mode(out2, p), -r}};
      rules[detail::mode(in2, p)] = {{detail::mode(out1, p), r}, {detail::mode(out2, p), r}};
    }
  }
  return apply_mode_transform(s, rules);
}

/// Variable beam splitter with transmission t in [0, 1].
inline StateVector apply_vbs(const StateVector& s, std::string_view in, std::string_view reflect,
                             std::string_view transmit, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("vbs: transmission " + std::to_string(t) + " outside [0, 1]");
  detail::require_distinct({reflect, transmit}, "vbs");
  const double cr = std::sqrt(1.0 - t);
  const double ct = std::sqrt(t);
  ModeRules rules;
  for (Pol p : {Pol::H, Pol::V}) {
    rules[detail::mode(in, p)] = {{detail::mode(reflect, p), cr}, {detail::mode(transmit, p), ct}};
  }
  return apply_mode_transform(s, rules);
}

/// Negates every term with an odd photon number in `mode` (either polarization).
inline StateVector apply_phase_flip(const StateVector& s, std::string_view mode) {
  return s.transformed_amplitudes([&](const OccupationPattern& p, Amplitude a) {
    return (p.spatial_count(mode) % 2 == 1) ? -a : a;
  });
}

enum class ElementKind { PBS, BS5050, VBS, PhaseFlip };

/// Declarative element with named port bindings. PBS accepts either the
/// split ports {in, outH, outV} or the merge ports {inH, inV, out}.
struct ElementSpec {
  ElementKind kind = ElementKind::BS5050;
  std::map<std::string, std::string> ports;
  double t = 0.0;

  const std::string& port(const std::string& name) const {
    auto it = ports.find(name);
    if (it == ports.end()) throw PortContractError("element is missing port '" + name + "'");
    return it->second;
  }
  bool has_port(const std::string& name) const { return ports.count(name) != 0; }
};

inline StateVector apply_element(const StateVector& s, const ElementSpec& e) {
  switch (e.kind) {
    case ElementKind::PBS:
      if (e.has_port("in")) return apply_pbs(s, e.port("in"), e.port("outH"), e.port("outV"));
      return merge_pbs(s, e.port("inH"), e.port("inV"), e.port("out"));
    case ElementKind::BS5050:
      return apply_bs(s, e.port("in1"), e.port("in2"), e.port("out1"), e.port("out2"));
    case ElementKind::VBS:
      return apply_vbs(s, e.port("in"), e.port("reflect"), e.port("transmit"), e.t);
    case ElementKind::PhaseFlip:
      return apply_phase_flip(s, e.port("mode"));
  }
  throw PortContractError("unknown element kind");
}

}  // namespace ecpsim

#endif  // ECPSIM_ELEMENTS_HPP
