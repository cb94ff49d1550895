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

// Heralding: number-resolving detection and the cross-Kerr QND check.
//
// The QND is not simulated through its coherent probe. It is the projective
// measurement the probe induces: the homodyne readout resolves |n_a - n_b|
// and nothing else, so +theta and -theta land in the same class and the
// photons survive.

#ifndef ECPSIM_MEASUREMENT_HPP
#define ECPSIM_MEASUREMENT_HPP

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ecpsim/elements.hpp"
#include "ecpsim/errors.hpp"
#include "ecpsim/fock.hpp"

namespace ecpsim {

struct DetectorModel {
  enum class Kind { AnalyticFactor, BernoulliLoss };

  double eta_p = 1.0;
  Kind kind = Kind::AnalyticFactor;
  unsigned clicks = 1;  // required clicks m for AnalyticFactor

  static DetectorModel analytic(double eta, unsigned m = 1) {
    validate_eta(eta);
    return DetectorModel{eta, Kind::AnalyticFactor, m};
  }
  static DetectorModel bernoulli(double eta) {
    validate_eta(eta);
    return DetectorModel{eta, Kind::BernoulliLoss, 1};
  }

  DetectorModel with_clicks(unsigned m) const {
    DetectorModel d = *this;
    d.clicks = m;
    return d;
  }

  /// Probability that every required photon produces a click.
  double success_factor() const { return std::pow(eta_p, static_cast<double>(clicks)); }

  static void validate_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("detector efficiency outside [0, 1]");
  }
};

inline unsigned delta_n(const OccupationPattern& p, std::string_view a, std::string_view b) {
  const unsigned na = p.spatial_count(a);
  const unsigned nb = p.spatial_count(b);
  return na > nb ? na - nb : nb - na;
}

/// Unnormalized component with |n_a - n_b| == cls.
inline StateVector qnd_component(const StateVector& s, std::string_view a, std::string_view b, unsigned cls) {
  return s.filtered([&](const OccupationPattern& p) { return delta_n(p, a, b) == cls; });
}

inline Projection qnd_select(const StateVector& s, std::string_view a, std::string_view b, unsigned cls) {
  return project_occupation(s, [&](const OccupationPattern& p) { return delta_n(p, a, b) == cls; });
}

/// Detectors that must register exactly one photon between them.
struct DetectorGroup {
  std::string name;
  std::vector<std::string> modes;
};

/// Flip `mode` when `detector` registers the photon.
struct FlipRule {
  std::string detector;
  std::string mode;
};

struct HeraldOutcome {
  double probability = 0.0;           // squared norm of the pre-collapse component
  double detected_probability = 0.0;  // after the efficiency model (success outcomes only)
  std::map<std::string, unsigned> clicks;
  OccupationPattern detector_pattern;  // polarization-resolved counts at the detectors
  StateVector residual;                // renormalized, detector modes traced out, uncorrected
  std::vector<std::string> corrections;
  bool success = false;

  StateVector corrected() const {
    StateVector out = residual;
    for (const auto& m : corrections) out = apply_phase_flip(out, m);
    return out;
  }
};

/// Enumerates every detector pattern present in `s`. An outcome succeeds when
/// each group holds exactly one photon; a doubly occupied detector is a
/// failure. Detectors do not resolve polarization, so a click pattern can span
/// several polarization-resolved outcomes; they are kept apart because each
/// leaves a pure residual.
inline std::vector<HeraldOutcome> herald(const StateVector& s, const std::vector<DetectorGroup>& groups,
                                         const std::vector<FlipRule>& flips, const DetectorModel& model) {
  std::set<std::string> detectors;
  for (const auto& g : groups) detectors.insert(g.modes.begin(), g.modes.end());
  auto is_detector = [&](const std::string& spatial) { return detectors.count(spatial) != 0; };
  auto is_residual = [&](const std::string& spatial) { return detectors.count(spatial) == 0; };

  std::map<OccupationPattern, StateVector::Terms> by_pattern;
  for (const auto& [p, a] : s.terms()) {
    by_pattern[p.restricted(is_detector)][p.restricted(is_residual)] += a;
  }

  std::vector<HeraldOutcome> out;
  out.reserve(by_pattern.size());
  for (auto& [det, terms] : by_pattern) {
    HeraldOutcome o;
    o.detector_pattern = det;
    for (const auto& d : detectors) {
      const unsigned n = det.spatial_count(d);
      if (n > 0) o.clicks[d] = n;
    }
    StateVector component(std::move(terms));
    o.probability = component.norm_sq();
    if (o.probability > 0.0) o.residual = component.normalized();
    o.success = o.probability > 0.0;
    for (const auto& g : groups) {
      unsigned n = 0;
      for (const auto& m : g.modes) n += det.spatial_count(m);
      if (n != 1) o.success = false;
    }
    if (o.success) {
      for (const auto& f : flips) {
        auto it = o.clicks.find(f.detector);
        if (it != o.clicks.end() && it->second == 1) o.corrections.push_back(f.mode);
      }
      o.detected_probability = o.probability * model.success_factor();
    } else {
      o.detected_probability = o.probability;
    }
    out.push_back(std::move(o));
  }
  return out;
}

inline std::vector<HeraldOutcome> herald(const StateVector& s, const std::vector<std::string>& detector_modes,
                                         const std::vector<FlipRule>& flips, const DetectorModel& model) {
  return herald(s, {DetectorGroup{"detectors", detector_modes}}, flips, model);
}

inline double success_probability(const std::vector<HeraldOutcome>& outcomes) {
  double p = 0.0;
  for (const auto& o : outcomes) {
    if (o.success) p += o.detected_probability;
  }
  return p;
}

}  // namespace ecpsim

#endif  // ECPSIM_MEASUREMENT_HPP
