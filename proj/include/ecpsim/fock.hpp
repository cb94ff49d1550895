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

// Sparse few-photon Fock states over labeled, polarization-carrying modes.
//
// A StateVector maps occupation patterns to complex amplitudes. Values are
// immutable once built; every operation returns a new state. Amplitudes with
// magnitude below kPruneThreshold are dropped on construction, so the map
// only ever holds the support of the state.

#ifndef ECPSIM_FOCK_HPP
#define ECPSIM_FOCK_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecpsim/errors.hpp"

namespace ecpsim {

using Amplitude = std::complex<double>;

inline constexpr double kPruneThreshold = 1e-15;
inline constexpr double kTolerance = 1e-12;
inline constexpr unsigned kDefaultPhotonCap = 6;

enum class Pol : std::uint8_t { H = 0, V = 1 };

constexpr std::string_view to_string(Pol p) noexcept { return p == Pol::H ? "H" : "V"; }

constexpr Pol other(Pol p) noexcept { return p == Pol::H ? Pol::V : Pol::H; }

inline std::optional<Pol> parse_pol(std::string_view text) noexcept {
  if (text == "H") return Pol::H;
  if (text == "V") return Pol::V;
  return std::nullopt;
}

/// One bosonic mode: a spatial path plus a polarization.
struct ModeRef {
  std::string spatial;
  Pol pol = Pol::H;

  friend bool operator==(const ModeRef&, const ModeRef&) = default;
  friend auto operator<=>(const ModeRef& a, const ModeRef& b) {
    if (auto c = a.spatial <=> b.spatial; c != 0) return c;
    return a.pol <=> b.pol;
  }
};

inline std::string to_string(const ModeRef& m) {
  return m.spatial + "." + std::string(to_string(m.pol));
}

/// Photon counts per mode in canonical sparse form: sorted by mode, no zeros.
class OccupationPattern {
 public:
  using Entry = std::pair<ModeRef, unsigned>;

  OccupationPattern() = default;

  explicit OccupationPattern(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (auto& e : entries) {
      if (e.second == 0) continue;
      if (!entries_.empty() && entries_.back().first == e.first) {
        entries_.back().second += e.second;
      } else {
        entries_.push_back(std::move(e));
      }
    }
  }

  static OccupationPattern single(ModeRef mode, unsigned n = 1) {
    return OccupationPattern({{std::move(mode), n}});
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  unsigned count(const ModeRef& mode) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), mode,
                               [](const Entry& e, const ModeRef& m) { return e.first < m; });
    return (it != entries_.end() && it->first == mode) ? it->second : 0U;
  }

  /// Photons in a spatial mode, summed over both polarizations.
  unsigned spatial_count(std::string_view spatial) const noexcept {
    unsigned n = 0;
    for (const auto& [m, c] : entries_) {
      if (m.spatial == spatial) n += c;
    }
    return n;
  }

  unsigned total() const noexcept {
    unsigned n = 0;
    for (const auto& e : entries_) n += e.second;
    return n;
  }

  OccupationPattern with_added(const ModeRef& mode, unsigned n = 1) const {
    auto entries = entries_;
    entries.emplace_back(mode, n);
    return OccupationPattern(std::move(entries));
  }

  /// Keeps only entries whose spatial mode satisfies `keep`.
  template <class Keep>
  OccupationPattern restricted(Keep keep) const {
    OccupationPattern out;
    for (const auto& e : entries_) {
      if (keep(e.first.spatial)) out.entries_.push_back(e);
    }
    return out;
  }

  /// `spatial.pol:count` entries joined by commas; "vac" for the vacuum.
  std::string to_string() const {
    if (entries_.empty()) return "vac";
    std::string out;
    for (const auto& [m, c] : entries_) {
      if (!out.empty()) out += ',';
      out += ecpsim::to_string(m) + ":" + std::to_string(c);
    }
    return out;
  }

  friend bool operator==(const OccupationPattern&, const OccupationPattern&) = default;
  friend bool operator<(const OccupationPattern& a, const OccupationPattern& b) {
    return std::lexicographical_compare(
        a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
        [](const Entry& x, const Entry& y) {
          if (x.first != y.first) return x.first < y.first;
          return x.second < y.second;
        });
  }

 private:
  std::vector<Entry> entries_;
};

namespace detail {

inline double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

inline std::string format_double17(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace detail

class StateVector {
 public:
  using Terms = std::map<OccupationPattern, Amplitude>;

  /// The zero vector. Used as the marker for an empty projection.
  StateVector() = default;

  explicit StateVector(Terms terms) : terms_(std::move(terms)) {
    std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
  }

  StateVector(std::initializer_list<std::pair<const OccupationPattern, Amplitude>> terms)
      : StateVector(Terms(terms)) {}

  static StateVector vacuum() { return StateVector(Terms{{OccupationPattern{}, Amplitude{1.0}}}); }

  static StateVector photon(ModeRef mode, Amplitude amp = 1.0) {
    return StateVector(Terms{{OccupationPattern::single(std::move(mode)), amp}});
  }

  const Terms& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Amplitude amplitude(const OccupationPattern& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? Amplitude{} : it->second;
  }

  double norm_sq() const noexcept {
    double n = 0.0;
    for (const auto& kv : terms_) n += std::norm(kv.second);
    return n;
  }

  std::set<ModeRef> modes() const {
    std::set<ModeRef> out;
    for (const auto& kv : terms_) {
      for (const auto& e : kv.first.entries()) out.insert(e.first);
    }
    return out;
  }

  unsigned max_photons() const noexcept {
    unsigned n = 0;
    for (const auto& kv : terms_) n = std::max(n, kv.first.total());
    return n;
  }

  StateVector scaled(Amplitude c) const {
    Terms out;
    for (const auto& [p, a] : terms_) out.emplace(p, a * c);
    return StateVector(std::move(out));
  }

  StateVector normalized() const {
    const double n = norm_sq();
    if (!(n > 0.0)) throw DegenerateStateError("cannot normalize a zero-norm state");
    return scaled(1.0 / std::sqrt(n));
  }

  /// Unnormalized component whose patterns satisfy `pred`.
  template <class Pred>
  StateVector filtered(Pred pred) const {
    Terms out;
    for (const auto& [p, a] : terms_) {
      if (pred(p)) out.emplace(p, a);
    }
    return StateVector(std::move(out));
  }

  /// Applies `f(pattern, amplitude) -> amplitude` to every term.
  template <class F>
  StateVector transformed_amplitudes(F f) const {
    Terms out;
    for (const auto& [p, a] : terms_) out.emplace(p, f(p, a));
    return StateVector(std::move(out));
  }

  /// Relabels every pattern; colliding images add up.
  template <class F>
  StateVector mapped_patterns(F f) const {
    Terms out;
    for (const auto& [p, a] : terms_) out[f(p)] += a;
    return StateVector(std::move(out));
  }

  friend StateVector operator+(const StateVector& a, const StateVector& b) {
    Terms out = a.terms_;
    for (const auto& [p, amp] : b.terms_) out[p] += amp;
    return StateVector(std::move(out));
  }

  /// One term per line: `<re> <im> <pattern>`, 17 significant digits.
  std::string to_canonical_text() const {
    std::string out;
    for (const auto& [p, a] : terms_) {
      out += detail::format_double17(a.real());
      out += ' ';
      out += detail::format_double17(a.imag());
      out += ' ';
      out += p.to_string();
      out += '\n';
    }
    return out;
  }

 private:
  Terms terms_;
};

/// <a|b>
inline Amplitude inner(const StateVector& a, const StateVector& b) {
  Amplitude acc{};
  const auto& small = a.size() <= b.size() ? a.terms() : b.terms();
  const bool a_small = a.size() <= b.size();
  for (const auto& [p, amp] : small) {
    if (a_small) {
      acc += std::conj(amp) * b.amplitude(p);
    } else {
      acc += std::conj(a.amplitude(p)) * amp;
    }
  }
  return acc;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  const auto ma = a.modes();
  for (const auto& m : b.modes()) {
    if (ma.count(m)) throw ModeCollisionError("tensor: mode " + to_string(m) + " occupied in both factors");
  }
  StateVector::Terms out;
  for (const auto& [pa, xa] : a.terms()) {
    for (const auto& [pb, xb] : b.terms()) {
      auto entries = pa.entries();
      entries.insert(entries.end(), pb.entries().begin(), pb.entries().end());
      out[OccupationPattern(std::move(entries))] += xa * xb;
    }
  }
  return StateVector(std::move(out));
}

/// |<a|b>|^2 / (|a|^2 |b|^2); insensitive to global phase and normalization.
inline double fidelity(const StateVector& a, const StateVector& b) {
  const double na = a.norm_sq();
  const double nb = b.norm_sq();
  if (!(na > 0.0) || !(nb > 0.0)) throw DegenerateStateError("fidelity of a zero-norm state");
  const double f = std::norm(inner(a, b)) / (na * nb);
  return std::clamp(f, 0.0, 1.0);
}

/// Linear substitution of creation operators: each input mode maps to a
/// superposition of output modes. Modes without a rule are left untouched.
using ModeRules = std::map<ModeRef, std::vector<std::pair<ModeRef, Amplitude>>>;

namespace detail {

inline void check_isometry(const ModeRules& rules) {
  std::vector<std::map<ModeRef, Amplitude>> columns;
  std::vector<const ModeRef*> names;
  for (const auto& [in, images] : rules) {
    std::map<ModeRef, Amplitude> col;
    for (const auto& [out, c] : images) col[out] += c;
    columns.push_back(std::move(col));
    names.push_back(&in);
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = i; j < columns.size(); ++j) {
      Amplitude dot{};
      for (const auto& [m, c] : columns[i]) {
        auto it = columns[j].find(m);
        if (it != columns[j].end()) dot += std::conj(c) * it->second;
      }
      const Amplitude want = (i == j) ? Amplitude{1.0} : Amplitude{};
      if (std::abs(dot - want) > kTolerance) {
        throw UnitarityError("mode transform is not unitary on " + to_string(*names[i]) + " / " +
                             to_string(*names[j]));
      }
    }
  }
}

}  // namespace detail

inline StateVector apply_mode_transform(const StateVector& s, const ModeRules& rules,
                                        unsigned photon_cap = kDefaultPhotonCap) {
  detail::check_isometry(rules);
  std::set<ModeRef> outputs;
  for (const auto& [in, images] : rules) {
    for (const auto& img : images) outputs.insert(img.first);
  }
  // An output that is neither transformed nor empty would receive photons
  // without being part of the unitary; that breaks norm preservation.
  for (const auto& m : s.modes()) {
    if (outputs.count(m) && !rules.count(m)) {
      throw UnitarityError("output mode " + to_string(m) + " is occupied but not transformed");
    }
  }

  StateVector::Terms out;
  for (const auto& [pattern, amp] : s.terms()) {
    if (pattern.total() > photon_cap) {
      throw UnsupportedInstanceError("term with " + std::to_string(pattern.total()) +
                                     " photons exceeds the photon cap of " + std::to_string(photon_cap));
    }
    std::vector<OccupationPattern::Entry> untouched;
    std::vector<const std::vector<std::pair<ModeRef, Amplitude>>*> photons;
    double in_norm = 1.0;
    for (const auto& [mode, n] : pattern.entries()) {
      auto it = rules.find(mode);
      if (it == rules.end()) {
        untouched.emplace_back(mode, n);
        continue;
      }
      for (unsigned k = 0; k < n; ++k) photons.push_back(&it->second);
      in_norm *= detail::factorial(n);
    }

    std::map<OccupationPattern, Amplitude> partial{
        {OccupationPattern(std::move(untouched)), amp / std::sqrt(in_norm)}};
    for (const auto* images : photons) {
      std::map<OccupationPattern, Amplitude> next;
      for (const auto& [p, a] : partial) {
        for (const auto& [m, c] : *images) next[p.with_added(m)] += a * c;
      }
      partial = std::move(next);
    }
    for (const auto& [p, a] : partial) {
      double out_norm = 1.0;
      for (const auto& [m, n] : p.entries()) {
        if (outputs.count(m)) out_norm *= detail::factorial(n);
      }
      out[p] += a * std::sqrt(out_norm);
    }
  }
  return StateVector(std::move(out));
}

struct Projection {
  double probability = 0.0;
  StateVector collapsed;  // empty when probability is zero
};

/// Projects onto the patterns accepted by `pred`. The probability is the
/// squared norm of the kept component, so an input that carries a branch
/// weight yields the absolute probability of the branch-and-outcome event.
template <class Pred>
Projection project_occupation(const StateVector& s, Pred pred) {
  auto kept = s.filtered(pred);
  const double p = kept.norm_sq();
  if (kept.empty() || !(p > 0.0)) return {0.0, StateVector{}};
  return {p, kept.normalized()};
}

}  // namespace ecpsim

#endif  // ECPSIM_FOCK_HPP
