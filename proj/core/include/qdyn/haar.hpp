// Copyright 2026 The qdyn Authors
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

#ifndef QDYN_HAAR_HPP
#define QDYN_HAAR_HPP

#include <cstdint>
#include <optional>

#include "qdyn/linalg.hpp"

namespace qdyn {

/// 64-bit counter-based generator: the n-th output is a SplitMix64
/// finalizer applied to (key + n * golden_gamma). Streams with different
/// keys are independent for practical purposes, and any output can be
/// recomputed from (key, counter) alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key = 0) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform in (0, 1): never returns 0, so log() is always safe.
  double uniform();
  /// Standard normal deviate by Box-Muller.
  double normal();
  /// Complex Gaussian with independent N(0, 1/2) real and imaginary parts.
  Complex complex_normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

/// Key for stream `stream` under master seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded source of Haar-distributed unitaries and random states.
class HaarSampler {
 public:
  HaarSampler(Index dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

  Index dim() const { return dim_; }
  CounterRng& rng() { return rng_; }

  ComplexMatrix unitary() { return unitary(dim_); }
  ComplexMatrix unitary(Index dim);
  /// Haar-random unit vector.
  ComplexVector pure_vector(Index dim);
  /// Hilbert-Schmidt random mixed state (normalized G G^dagger).
  DensityOperator mixed_state(Index dim);

 private:
  Index dim_;
  CounterRng rng_;
};

/// Ginibre matrix, QR, then R-diagonal phase normalization.
ComplexMatrix haar_unitary(Index dim, HaarSampler& sampler);

}  // namespace qdyn

#endif  // QDYN_HAAR_HPP
