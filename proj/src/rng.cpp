#include "msq/rng.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace msq {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t c : coords) s = splitmix64(s ^ splitmix64(c + kGolden));
  return s;
}

Stream::Stream(std::uint64_t seed) : engine_(seed) {}

double Stream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(engine_);
}

double Stream::uniform() {
  boost::random::uniform_01<double> dist;
  return dist(engine_);
}

double Stream::sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

std::uint64_t Stream::index(std::uint64_t n) {
  boost::random::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

}  // namespace msq
