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

#ifndef ECPSIM_PARAMS_HPP
#define ECPSIM_PARAMS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ecpsim/errors.hpp"
#include "ecpsim/fock.hpp"

namespace ecpsim {

/// Spatial coefficients of alpha|1,0> + beta|0,1>.
struct EntanglementParams {
  Amplitude alpha{1.0};
  Amplitude beta{0.0};
  std::optional<double> given_alpha_sq;  // exact |alpha|^2 when built from it

  static EntanglementParams from_alpha_sq(double alpha_sq) {
    if (!(alpha_sq >= 0.0 && alpha_sq <= 1.0)) throw ParameterError("alpha_sq outside [0, 1]");
    EntanglementParams e{std::sqrt(alpha_sq), std::sqrt(1.0 - alpha_sq), alpha_sq};
    e.validate();
    return e;
  }

  double alpha_sq() const { return given_alpha_sq ? *given_alpha_sq : std::norm(alpha); }
  double beta_sq() const { return given_alpha_sq ? 1.0 - *given_alpha_sq : std::norm(beta); }

  void validate() const {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kTolerance) {
      throw ParameterError("|alpha|^2 + |beta|^2 must equal 1");
    }
  }

  EntanglementParams swapped() const {
    if (given_alpha_sq) return from_alpha_sq(1.0 - *given_alpha_sq);
    return {beta, alpha, std::nullopt};
  }
};

/// Polarization qubit gamma|H> + delta|V> carried by the photon.
struct PolarizationParams {
  Amplitude gamma{1.0};
  Amplitude delta{0.0};
  std::optional<double> given_gamma_sq;

  static PolarizationParams from_gamma_sq(double gamma_sq) {
    if (!(gamma_sq >= 0.0 && gamma_sq <= 1.0)) throw ParameterError("gamma_sq outside [0, 1]");
    PolarizationParams p{std::sqrt(gamma_sq), std::sqrt(1.0 - gamma_sq), gamma_sq};
    p.validate();
    return p;
  }

  double gamma_sq() const { return given_gamma_sq ? *given_gamma_sq : std::norm(gamma); }
  double delta_sq() const { return given_gamma_sq ? 1.0 - *given_gamma_sq : std::norm(delta); }

  void validate() const {
    if (std::abs(std::norm(gamma) + std::norm(delta) - 1.0) > kTolerance) {
      throw ParameterError("|gamma|^2 + |delta|^2 must equal 1");
    }
  }
};

enum class AccountingMode { PaperBranch, JointCoherent };

inline std::string to_string(AccountingMode m) { return m == AccountingMode::PaperBranch ? "branch" : "joint"; }

/// VBS transmissions per round: `plus` drives the V arm, `minus` the H arm.
struct VbsSchedule {
  std::vector<double> plus;
  std::vector<double> minus;

  std::size_t rounds() const { return std::min(plus.size(), minus.size()); }
};

/// Transmission that balances amplitudes after k-1 recyclings:
/// t_k = 1 / (1 + (|beta|/|alpha|)^(2^k)), evaluated through the log ratio so
/// that |alpha|^(2^k) never underflows.
inline double balancing_transmission(const EntanglementParams& e, int k) {
  const double a = e.alpha_sq();
  const double b = e.beta_sq();
  if (!(a > 0.0) || !(b > 0.0)) throw ScheduleError("schedule undefined when alpha or beta is zero");
  if (k < 1) throw ScheduleError("round index starts at 1");
  if (k == 1) return a;
  const double log_ratio = std::ldexp(std::log(b) - std::log(a), k - 1);
  if (log_ratio > 700.0) return 0.0;
  if (log_ratio < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(log_ratio));
}

inline VbsSchedule vbs_schedule(const EntanglementParams& e, int max_rounds) {
  if (max_rounds < 1) throw ConfigurationError("max_rounds must be at least 1");
  VbsSchedule s;
  for (int k = 1; k <= max_rounds; ++k) s.plus.push_back(balancing_transmission(e, k));
  s.minus = s.plus;
  return s;
}

}  // namespace ecpsim

#endif  // ECPSIM_PARAMS_HPP
