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

// Laplace noise, noise-scale formulas, and empirical privacy diagnostics.
//
// Reproducibility: every random stream is a std::mt19937_64 engine, whose
// output sequence is fixed by the C++ standard. The engine seed for a stream
// is DeriveStreamSeed(user_seed, stream_id) (a SplitMix64 finaliser), so
// distinct stream ids never share an engine state. A Laplace variate is drawn
// by inverse CDF from one 64-bit output:
//
//   u = (floor(x / 2^11) + 0.5) / 2^53            in (0, 1)
//   Y = scale * ln(2u)             if u < 1/2
//   Y = -scale * ln(2(1 - u))      otherwise
//
// Scale 0 returns exactly 0 but still consumes one engine output, so draw
// counters stay aligned across scales.

#ifndef PRIVPACK_PRIVACY_H_
#define PRIVPACK_PRIVACY_H_

#include <cstdint>
#include <random>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace privpack {

struct PrivacySpec {
  double epsilon = 1.0;
  // 0 selects pure differential privacy where supported.
  double delta = 0.0;
  // Failure probability used by supply diagnostics.
  double beta = 0.05;
};

absl::Status ValidatePrivacySpec(const PrivacySpec& spec);

// Stream ids used across the library.
enum class StreamId : uint64_t {
  kSubgradientNoise = 1,
  kDemandNoise = 2,
  kPermutation = 3,
  kInstanceGenerator = 4,
  kAuditFirst = 5,
  kAuditSecond = 6,
  kConcentration = 7,
};

uint64_t DeriveStreamSeed(uint64_t seed, uint64_t stream_id);
inline uint64_t DeriveStreamSeed(uint64_t seed, StreamId stream) {
  return DeriveStreamSeed(seed, static_cast<uint64_t>(stream));
}

// Accepts decimal or 0x-prefixed hexadecimal 64-bit values.
absl::StatusOr<uint64_t> ParseSeed(const std::string& text);

class SeededRng {
 public:
  SeededRng(uint64_t seed, StreamId stream)
      : engine_(DeriveStreamSeed(seed, stream)) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double NextUnitOpen();
  // Uniform on [0, 1).
  double NextUnit();
  // Uniform integer in [0, bound) by rejection; bound > 0.
  uint64_t UniformInt(uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

class NoiseStream {
 public:
  NoiseStream(double scale, uint64_t seed, StreamId stream)
      : scale_(scale), seed_(seed), rng_(seed, stream) {}

  double Laplace();

  double scale() const { return scale_; }
  uint64_t seed() const { return seed_; }
  uint64_t draws_emitted() const { return draws_; }

 private:
  double scale_;
  uint64_t seed_;
  uint64_t draws_ = 0;
  SeededRng rng_;
};

// Inverse-CDF map from u in (0, 1) to Laplace(scale).
double LaplaceFromUniform(double u, double scale);

// eps / sqrt(8 T m ln(2/delta)); requires delta > 0.
absl::StatusOr<double> PerStepEpsilonDmw(const PrivacySpec& spec,
                                         int64_t rounds, int num_resources);

// m / eps when delta = 0, sqrt(8 m ln(1/delta)) / eps otherwise.
double SigmaDomw(const PrivacySpec& spec, int num_resources);

// Advanced composition of `rounds` eps_step-DP mechanisms:
//   eps_step sqrt(2 T ln(1/delta')) + T eps_step (e^eps_step - 1).
double CompositionEpsilon(double eps_step, int64_t rounds, double delta_prime);

// Histogram audit of the Laplace mechanism on two neighbouring inputs.
struct AuditConfig {
  // Laplace scale; 0 makes the mechanism deterministic.
  double noise_scale = 1.0;
  int64_t trials = 1000000;
  uint64_t seed = 0;
  double first_input = 0.0;
  double second_input = 1.0;
  int bins = 200;
  // Bins over the central (1 - 2 * tail_mass) quantile range of the pooled
  // outputs.
  double tail_mass = 0.0005;
  int64_t min_count = 100;
  // Each bin contributes |ln ratio| - z * stderr, stderr by the delta method.
  double confidence_z = 3.0;
};

struct AuditResult {
  // Empirical epsilon; +infinity when `non_private`.
  double estimate = 0.0;
  // Uncorrected max |ln ratio| over compared bins.
  double raw_max_log_ratio = 0.0;
  int bins_compared = 0;
  // Some bin holds >= min_count outputs of one input and none of the other.
  bool non_private = false;
};

absl::StatusOr<AuditResult> AuditMechanism(const AuditConfig& config);

// Convenience wrapper: scale 1/eps_step (eps_step = +inf gives scale 0).
absl::StatusOr<AuditResult> AuditLaplaceMechanism(double eps_step,
                                                  int64_t trials,
                                                  uint64_t seed);

// Monte-Carlo checks of the noise concentration bounds used in the accuracy
// analysis. Noise is Laplace(1/eps_step) per coordinate and round; eps_step =
// +inf means zero noise.
struct ConcentrationConfig {
  int num_resources = 4;
  int64_t rounds = 1000;
  double p_max = 1.0;
  double eps_step = 1.0;
  double beta = 0.05;
  int64_t trials = 1000;
  uint64_t seed = 0;
  double threshold_multiplier = 1.0;
};

struct ConcentrationResult {
  double threshold = 0.0;
  // Fraction of trials whose statistic exceeded +threshold (upper) and, for
  // the mirrored statistic, the lower tail.
  double upper_rate = 0.0;
  double lower_rate = 0.0;
};

// sum_t <q_t, nu_t> against p_max sqrt(8 T ln(6/beta)) / eps_step, with q_t
// the simplex vertex p_max e_j at the coordinate whose running noise sum is
// largest (upper) or smallest (lower) before round t.
absl::StatusOr<ConcentrationResult> CheckInnerProductConcentration(
    const ConcentrationConfig& config);

// sum_t sum_j q_tj max{0, nu_tj - ln(T)/eps_step} against
// 2 p_max sqrt(8 T ln(6/beta)) / eps_step, with q_t putting p_max on the two
// coordinates of largest running overflow (||q||_1 <= 2 p_max,
// ||q||_inf <= p_max). The lower rate mirrors the statistic with -nu.
absl::StatusOr<ConcentrationResult> CheckTruncationOverflow(
    const ConcentrationConfig& config);

}  // namespace privpack

#endif  // PRIVPACK_PRIVACY_H_
