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

// Published closed forms for the two concentration protocols. These are the
// reference values the simulation is compared against; several of them
// disagree with each other, and the comparison reports surface that.

#ifndef ECPSIM_FORMULAS_HPP
#define ECPSIM_FORMULAS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "ecpsim/params.hpp"

namespace ecpsim::formulas {

/// V-arm success with t = |alpha|^2: |alpha beta|^2 (1 + |delta|^2) eta.
inline double p_plus(const EntanglementParams& e, const PolarizationParams& p, double eta = 1.0) {
  return e.alpha_sq() * e.beta_sq() * (1.0 + p.delta_sq()) * eta;
}

/// H-arm success with t = |alpha|^2: |alpha beta|^2 (1 + |gamma|^2) eta.
inline double p_minus(const EntanglementParams& e, const PolarizationParams& p, double eta = 1.0) {
  return e.alpha_sq() * e.beta_sq() * (1.0 + p.gamma_sq()) * eta;
}

/// Sum of the two arm results, 3 |alpha beta|^2 eta.
inline double p_branch_sum(const EntanglementParams& e, const PolarizationParams& p, double eta = 1.0) {
  return p_plus(e, p, eta) + p_minus(e, p, eta);
}

/// The published protocol total 2 |alpha beta|^2 eta.
inline double p_published_total(const EntanglementParams& e, double eta = 1.0) {
  return 2.0 * e.alpha_sq() * e.beta_sq() * eta;
}

/// Hand analysis of the joint coherent run: 2 |alpha|^2 |beta|^4 eta^m.
inline double p_joint_predicted(const EntanglementParams& e, double eta = 1.0, unsigned clicks = 2) {
  return 2.0 * e.alpha_sq() * e.beta_sq() * e.beta_sq() * std::pow(eta, static_cast<double>(clicks));
}

/// QND |dn| = 1 weight of the V arm: |alpha|^2 (1 - t) + |beta|^2 |delta|^2 t.
inline double qnd_keep_plus(const EntanglementParams& e, const PolarizationParams& p, double t) {
  return e.alpha_sq() * (1.0 - t) + e.beta_sq() * p.delta_sq() * t;
}

/// Arm weights as quoted alongside the PBS split (they sum to more than one).
inline double quoted_plus_weight_split(const EntanglementParams& e, const PolarizationParams& p) {
  return e.alpha_sq() + e.beta_sq() * p.delta_sq();
}
inline double quoted_minus_weight_split(const EntanglementParams& e, const PolarizationParams& p) {
  return e.alpha_sq() + e.beta_sq() * p.gamma_sq();
}
/// Arm weights as quoted for the cross-Kerr protocol.
inline double quoted_plus_weight_qnd(const EntanglementParams& e, const PolarizationParams& p) {
  return e.alpha_sq() * p.gamma_sq() + p.delta_sq();
}
inline double quoted_minus_weight_qnd(const EntanglementParams& e, const PolarizationParams& p) {
  return e.alpha_sq() * p.delta_sq() + p.gamma_sq();
}

struct SeriesTerm {
  int k = 0;
  double p_k = 0.0;
  double p_total = 0.0;
};

namespace detail {

/// log(x^m + y^m) for x, y > 0 without forming the powers.
inline double log_power_sum(double log_x, double log_y, double m) {
  const double hi = std::max(log_x, log_y);
  const double lo = std::min(log_x, log_y);
  return m * hi + std::log1p(std::exp(m * (lo - hi)));
}

}  // namespace detail

/// Per-round success of the repeated cross-Kerr protocol without polarization
/// factors:
///   P_k = 2 eta |alpha beta|^(2^k) / prod_{j=2..k} (|alpha|^(2^j) + |beta|^(2^j))
/// evaluated in the log domain, together with the running total.
inline std::vector<SeriesTerm> series(const EntanglementParams& e, double eta, int max_k) {
  std::vector<SeriesTerm> out;
  const double a = e.alpha_sq();
  const double b = e.beta_sq();
  const bool zero = !(a > 0.0) || !(b > 0.0) || !(eta > 0.0);
  const double la = zero ? 0.0 : std::log(a);
  const double lb = zero ? 0.0 : std::log(b);
  double log_denominator = 0.0;
  double total = 0.0;
  for (int k = 1; k <= max_k; ++k) {
    double p_k = 0.0;
    if (!zero) {
      if (k >= 2) log_denominator += detail::log_power_sum(la, lb, std::ldexp(1.0, k - 1));
      const double log_numerator = std::log(2.0 * eta) + std::ldexp(la + lb, k - 1);
      p_k = std::exp(log_numerator - log_denominator);
    }
    total += p_k;
    out.push_back({k, p_k, total});
  }
  return out;
}

}  // namespace ecpsim::formulas

#endif  // ECPSIM_FORMULAS_HPP
