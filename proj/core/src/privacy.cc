// Copyright 2026 The privpack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privpack/privacy.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"

namespace privpack {
namespace {

constexpr double kTwoPow53 = 9007199254740992.0;

double NoiseScaleFor(double eps_step) {
  return std::isinf(eps_step) ? 0.0 : 1.0 / eps_step;
}

absl::Status ValidateConcentrationConfig(const ConcentrationConfig& c) {
  if (c.num_resources < 1) return absl::InvalidArgumentError("m must be >= 1");
  if (c.rounds < 1) return absl::InvalidArgumentError("T must be >= 1");
  if (!(c.p_max > 0.0)) return absl::InvalidArgumentError("p_max must be > 0");
  if (!(c.eps_step > 0.0)) {
    return absl::InvalidArgumentError("eps_step must be > 0");
  }
  if (!(c.beta > 0.0 && c.beta < 1.0)) {
    return absl::InvalidArgumentError("beta must lie in (0, 1)");
  }
  if (c.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  return absl::OkStatus();
}

// p_max sqrt(8 T ln(6/beta)) / eps_step, or 0 without noise.
double ConcentrationRadius(const ConcentrationConfig& c) {
  if (std::isinf(c.eps_step)) return 0.0;
  return c.p_max * std::sqrt(8.0 * static_cast<double>(c.rounds) *
                             std::log(6.0 / c.beta)) /
         c.eps_step;
}

// Index of the largest entry, smallest index on ties.
int ArgMax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

int ArgMin(const std::vector<double>& v) {
  return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

// Indices of the two largest entries (one when v has a single entry).
std::pair<int, int> TopTwo(const std::vector<double>& v) {
  const int first = ArgMax(v);
  int second = -1;
  for (int j = 0; j < static_cast<int>(v.size()); ++j) {
    if (j == first) continue;
    if (second < 0 || v[j] > v[second]) second = j;
  }
  return {first, second};
}

}  // namespace

absl::Status ValidatePrivacySpec(const PrivacySpec& spec) {
  if (!(spec.epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be > 0");
  }
  if (!(spec.delta >= 0.0 && spec.delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in [0, 1)");
  }
  if (!(spec.beta > 0.0 && spec.beta < 1.0)) {
    return absl::InvalidArgumentError("beta must lie in (0, 1)");
  }
  return absl::OkStatus();
}

uint64_t DeriveStreamSeed(uint64_t seed, uint64_t stream_id) {
  uint64_t z = seed + (stream_id + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

absl::StatusOr<uint64_t> ParseSeed(const std::string& text) {
  if (text.empty()) return absl::InvalidArgumentError("empty seed");
  int base = 10;
  std::string digits = text;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    digits = text.substr(2);
  }
  if (digits.empty() || digits[0] == '-' || digits[0] == '+') {
    return absl::InvalidArgumentError(absl::StrCat("invalid seed: ", text));
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(digits.c_str(), &end, base);
  if (errno == ERANGE || end == digits.c_str() || *end != '\0') {
    return absl::InvalidArgumentError(absl::StrCat("invalid seed: ", text));
  }
  return static_cast<uint64_t>(value);
}

double SeededRng::NextUnitOpen() {
  return (static_cast<double>(engine_() >> 11) + 0.5) / kTwoPow53;
}

double SeededRng::NextUnit() {
  return static_cast<double>(engine_() >> 11) / kTwoPow53;
}

uint64_t SeededRng::UniformInt(uint64_t bound) {
  // Reject the top sliver so every residue is equally likely.
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

double LaplaceFromUniform(double u, double scale) {
  if (scale == 0.0) return 0.0;
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

double NoiseStream::Laplace() {
  ++draws_;
  return LaplaceFromUniform(rng_.NextUnitOpen(), scale_);
}

absl::StatusOr<double> PerStepEpsilonDmw(const PrivacySpec& spec,
                                         int64_t rounds, int num_resources) {
  if (!(spec.epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be > 0");
  }
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
    return absl::InvalidArgumentError(
        "the dual multiplicative-weights solver needs delta in (0, 1)");
  }
  if (rounds < 1 || num_resources < 1) {
    return absl::InvalidArgumentError("T and m must be >= 1");
  }
  return spec.epsilon / std::sqrt(8.0 * static_cast<double>(rounds) *
                                  num_resources * std::log(2.0 / spec.delta));
}

double SigmaDomw(const PrivacySpec& spec, int num_resources) {
  if (spec.delta == 0.0) return num_resources / spec.epsilon;
  return std::sqrt(8.0 * num_resources * std::log(1.0 / spec.delta)) /
         spec.epsilon;
}

double CompositionEpsilon(double eps_step, int64_t rounds,
                          double delta_prime) {
  const double t = static_cast<double>(rounds);
  return eps_step * std::sqrt(2.0 * t * std::log(1.0 / delta_prime)) +
         t * eps_step * std::expm1(eps_step);
}

absl::StatusOr<AuditResult> AuditMechanism(const AuditConfig& config) {
  if (config.trials < 1 || config.bins < 1 || config.min_count < 1) {
    return absl::InvalidArgumentError(
        "audit needs trials, bins, min_count >= 1");
  }
  if (!(config.noise_scale >= 0.0)) {
    return absl::InvalidArgumentError("noise scale must be >= 0");
  }
  if (!(config.tail_mass >= 0.0 && config.tail_mass < 0.5)) {
    return absl::InvalidArgumentError("tail_mass must lie in [0, 0.5)");
  }
  const size_t n = static_cast<size_t>(config.trials);
  NoiseStream first(config.noise_scale, config.seed, StreamId::kAuditFirst);
  NoiseStream second(config.noise_scale, config.seed, StreamId::kAuditSecond);
  std::vector<double> out_first(n), out_second(n);
  for (size_t t = 0; t < n; ++t) {
    out_first[t] = config.first_input + first.Laplace();
    out_second[t] = config.second_input + second.Laplace();
  }

  std::vector<double> pooled;
  pooled.reserve(2 * n);
  pooled.insert(pooled.end(), out_first.begin(), out_first.end());
  pooled.insert(pooled.end(), out_second.begin(), out_second.end());
  auto quantile = [&pooled](double q) {
    const size_t idx = std::min(
        pooled.size() - 1,
        static_cast<size_t>(q * static_cast<double>(pooled.size() - 1)));
    std::nth_element(pooled.begin(), pooled.begin() + idx, pooled.end());
    return pooled[idx];
  };
  const double lo = quantile(config.tail_mass);
  double hi = quantile(1.0 - config.tail_mass);
  if (!(hi > lo)) hi = lo + 1.0;
  const double width = (hi - lo) / config.bins;

  std::vector<int64_t> count_first(config.bins, 0), count_second(config.bins, 0);
  auto bin_of = [&](double v) -> int {
    if (v < lo || v > hi) return -1;
    return std::min(config.bins - 1, static_cast<int>((v - lo) / width));
  };
  for (double v : out_first) {
    if (int b = bin_of(v); b >= 0) ++count_first[b];
  }
  for (double v : out_second) {
    if (int b = bin_of(v); b >= 0) ++count_second[b];
  }

  AuditResult result;
  double best = 0.0;
  for (int b = 0; b < config.bins; ++b) {
    const int64_t c1 = count_first[b];
    const int64_t c2 = count_second[b];
    if ((c1 >= config.min_count && c2 == 0) ||
        (c2 >= config.min_count && c1 == 0)) {
      result.non_private = true;
    }
    if (c1 < config.min_count || c2 < config.min_count) continue;
    ++result.bins_compared;
    const double log_ratio =
        std::fabs(std::log(static_cast<double>(c1) / static_cast<double>(c2)));
    const double stderr_log =
        std::sqrt(1.0 / static_cast<double>(c1) + 1.0 / static_cast<double>(c2));
    result.raw_max_log_ratio = std::max(result.raw_max_log_ratio, log_ratio);
    best = std::max(best, log_ratio - config.confidence_z * stderr_log);
  }
  result.estimate =
      result.non_private ? std::numeric_limits<double>::infinity() : best;
  return result;
}

absl::StatusOr<AuditResult> AuditLaplaceMechanism(double eps_step,
                                                  int64_t trials,
                                                  uint64_t seed) {
  if (!(eps_step > 0.0)) {
    return absl::InvalidArgumentError("eps_step must be > 0");
  }
  AuditConfig config;
  config.noise_scale = NoiseScaleFor(eps_step);
  config.trials = trials;
  config.seed = seed;
  return AuditMechanism(config);
}

absl::StatusOr<ConcentrationResult> CheckInnerProductConcentration(
    const ConcentrationConfig& config) {
  if (absl::Status s = ValidateConcentrationConfig(config); !s.ok()) return s;
  const int m = config.num_resources;
  ConcentrationResult result;
  result.threshold = config.threshold_multiplier * ConcentrationRadius(config);
  NoiseStream noise(NoiseScaleFor(config.eps_step), config.seed,
                    StreamId::kConcentration);
  std::vector<double> running(m), nu(m);
  int64_t upper_hits = 0, lower_hits = 0;
  for (int64_t trial = 0; trial < config.trials; ++trial) {
    std::fill(running.begin(), running.end(), 0.0);
    double upper_sum = 0.0, lower_sum = 0.0;
    for (int64_t t = 0; t < config.rounds; ++t) {
      const int up = ArgMax(running);
      const int down = ArgMin(running);
      for (int j = 0; j < m; ++j) nu[j] = noise.Laplace();
      upper_sum += config.p_max * nu[up];
      lower_sum += config.p_max * nu[down];
      for (int j = 0; j < m; ++j) running[j] += nu[j];
    }
    if (upper_sum > result.threshold) ++upper_hits;
    if (lower_sum < -result.threshold) ++lower_hits;
  }
  result.upper_rate = static_cast<double>(upper_hits) / config.trials;
  result.lower_rate = static_cast<double>(lower_hits) / config.trials;
  return result;
}

absl::StatusOr<ConcentrationResult> CheckTruncationOverflow(
    const ConcentrationConfig& config) {
  if (absl::Status s = ValidateConcentrationConfig(config); !s.ok()) return s;
  const int m = config.num_resources;
  ConcentrationResult result;
  result.threshold =
      2.0 * config.threshold_multiplier * ConcentrationRadius(config);
  const double cutoff =
      std::isinf(config.eps_step)
          ? 0.0
          : std::log(static_cast<double>(config.rounds)) / config.eps_step;
  NoiseStream noise(NoiseScaleFor(config.eps_step), config.seed,
                    StreamId::kConcentration);
  std::vector<double> over_pos(m), over_neg(m);
  int64_t upper_hits = 0, lower_hits = 0;
  for (int64_t trial = 0; trial < config.trials; ++trial) {
    std::fill(over_pos.begin(), over_pos.end(), 0.0);
    std::fill(over_neg.begin(), over_neg.end(), 0.0);
    double upper_sum = 0.0, lower_sum = 0.0;
    for (int64_t t = 0; t < config.rounds; ++t) {
      const auto [pos_a, pos_b] = TopTwo(over_pos);
      const auto [neg_a, neg_b] = TopTwo(over_neg);
      for (int j = 0; j < m; ++j) {
        const double nu = noise.Laplace();
        const double up = std::max(0.0, nu - cutoff);
        const double down = std::max(0.0, -nu - cutoff);
        if (j == pos_a || j == pos_b) upper_sum += config.p_max * up;
        if (j == neg_a || j == neg_b) lower_sum += config.p_max * down;
        over_pos[j] += up;
        over_neg[j] += down;
      }
    }
    if (upper_sum > result.threshold) ++upper_hits;
    if (lower_sum > result.threshold) ++lower_hits;
  }
  result.upper_rate = static_cast<double>(upper_hits) / config.trials;
  result.lower_rate = static_cast<double>(lower_hits) / config.trials;
  return result;
}

}  // namespace privpack
