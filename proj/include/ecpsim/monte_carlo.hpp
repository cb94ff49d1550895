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

// Trial-by-trial sampling of the protocol outcome chain.
//
// Each lane of a trial walks the rounds: success, recyclable failure or
// terminal failure, drawn from the exact engine's per-round probabilities
// conditioned on having been recycled. A success herald then needs every one
// of its photons to be detected, each independently with probability eta.
// In branch accounting the lanes are sampled independently and their
// successes add up, mirroring how the branch probabilities are summed.
//
// Trials are cut into fixed chunks, each with its own generator seeded from
// (seed, chunk index), so estimates do not depend on the thread count.

#ifndef ECPSIM_MONTE_CARLO_HPP
#define ECPSIM_MONTE_CARLO_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ecpsim/errors.hpp"
#include "ecpsim/parallel.hpp"
#include "ecpsim/protocols.hpp"

namespace ecpsim {

inline constexpr std::uint64_t kTrialsPerChunk = 4096;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

struct McEstimate {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double p_total = 0.0;
  double std_error = 0.0;
  std::vector<double> p_round;                      // per round, summed over lanes
  std::vector<std::vector<double>> p_round_lane;    // [round][lane]
};

namespace detail {

struct LaneChain {
  unsigned clicks = 1;
  std::vector<double> success;  // conditional on reaching the round
  std::vector<double> recycle;
};

inline std::vector<LaneChain> lane_chains(const ExactTrace& trace) {
  std::vector<LaneChain> chains;
  if (trace.rounds.empty()) return chains;
  chains.resize(trace.rounds.front().lanes.size());
  for (std::size_t l = 0; l < chains.size(); ++l) {
    double reach = 1.0;
    chains[l].clicks = trace.rounds.front().lanes[l].clicks;
    for (const auto& r : trace.rounds) {
      const auto& lr = r.lanes.at(l);
      chains[l].success.push_back(reach > 0.0 ? std::min(1.0, lr.p_success_raw / reach) : 0.0);
      chains[l].recycle.push_back(reach > 0.0 ? std::min(1.0, lr.p_recycle / reach) : 0.0);
      reach = lr.p_recycle;
    }
  }
  return chains;
}

struct ChunkTally {
  std::vector<std::vector<std::uint64_t>> hits;  // [round][lane]
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
};

}  // namespace detail

/// Samples `trials` runs of the outcome chain recorded in `trace`.
inline McEstimate sample_trace(const ExactTrace& trace, double eta, std::uint64_t trials, std::uint64_t seed,
                               unsigned threads = 0) {
  if (trials < 1) throw ConfigurationError("Monte Carlo needs at least one trial");
  DetectorModel::validate_eta(eta);
  const auto chains = detail::lane_chains(trace);
  const std::size_t rounds = trace.rounds.size();
  const std::uint64_t chunks = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  std::vector<detail::ChunkTally> tallies(chunks);

  parallel_for(
      chunks,
      [&](std::size_t c) {
        std::mt19937_64 rng(stream_seed(seed, c));
        auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        auto& tally = tallies[c];
        tally.hits.assign(rounds, std::vector<std::uint64_t>(chains.size(), 0));
        const std::uint64_t begin = c * kTrialsPerChunk;
        const std::uint64_t end = std::min(trials, begin + kTrialsPerChunk);
        for (std::uint64_t i = begin; i < end; ++i) {
          std::uint64_t count = 0;
          for (std::size_t l = 0; l < chains.size(); ++l) {
            for (std::size_t k = 0; k < rounds; ++k) {
              const double u = uniform();
              if (u < chains[l].success[k]) {
                bool detected = true;
                for (unsigned m = 0; m < chains[l].clicks; ++m) detected = (uniform() < eta) && detected;
                if (detected) {
                  ++tally.hits[k][l];
                  ++count;
                }
                break;
              }
              if (u >= chains[l].success[k] + chains[l].recycle[k]) break;
            }
          }
          tally.sum += count;
          tally.sum_sq += count * count;
        }
      },
      threads);

  McEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.p_round.assign(rounds, 0.0);
  est.p_round_lane.assign(rounds, std::vector<double>(chains.size(), 0.0));
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  for (const auto& t : tallies) {
    sum += t.sum;
    sum_sq += t.sum_sq;
    for (std::size_t k = 0; k < rounds; ++k) {
      for (std::size_t l = 0; l < chains.size(); ++l) {
        est.p_round_lane[k][l] += static_cast<double>(t.hits[k][l]);
      }
    }
  }
  const double n = static_cast<double>(trials);
  for (std::size_t k = 0; k < rounds; ++k) {
    for (auto& v : est.p_round_lane[k]) {
      v /= n;
      est.p_round[k] += v;
    }
  }
  est.p_total = static_cast<double>(sum) / n;
  if (trials > 1) {
    const double var = (static_cast<double>(sum_sq) - n * est.p_total * est.p_total) / (n - 1.0);
    est.std_error = std::sqrt(std::max(0.0, var) / n);
  }
  return est;
}

/// Replaces the probabilities of an exact report with sampled estimates.
/// Fidelities stay exact: every sampled success leaves one of the exactly
/// known output states.
inline ProtocolReport with_monte_carlo(ProtocolReport r, std::uint64_t trials, std::uint64_t seed,
                                       unsigned threads = 0) {
  const McEstimate est = sample_trace(r.trace, r.eta_p, trials, seed, threads);
  for (std::size_t k = 0; k < r.rounds.size(); ++k) {
    r.rounds[k].p_success = est.p_round[k];
    for (std::size_t l = 0; l < r.rounds[k].lanes.size(); ++l) r.rounds[k].lanes[l].second = est.p_round_lane[k][l];
  }
  r.p_total = est.p_total;
  r.engine = EngineInfo{true, trials, seed, est.std_error};
  r.paper_comparison = closed_form_comparison(r);
  return r;
}

}  // namespace ecpsim

#endif  // ECPSIM_MONTE_CARLO_HPP
