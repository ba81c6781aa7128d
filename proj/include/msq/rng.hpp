#pragma once

// Random streams for reproducible experiments.
//
// Every random draw in the library comes from a `Stream`: a std::mt19937_64
// engine (its output sequence is fixed by the C++ standard) seeded with a
// 64-bit value obtained by SplitMix64-mixing a master seed with one or more
// integer coordinates (cell index, trial index, block index). Distributions
// come from Boost.Random, whose algorithms are fixed in its headers, unlike
// the implementation-defined std:: distributions. A trial therefore sees the
// same numbers regardless of which worker thread runs it.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace msq {

/// One round of the SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t z) noexcept;

/// Substream seed: folds each coordinate into the master seed with
/// `s = splitmix64(s ^ splitmix64(c + golden))`.
std::uint64_t mix_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) noexcept;

class Stream {
 public:
  explicit Stream(std::uint64_t seed);

  double normal();
  /// Uniform on [0, 1).
  double uniform();
  /// +1 or -1 with equal probability.
  double sign();
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace msq
