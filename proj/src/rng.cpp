#include "lisg/rng.hpp"

#include <cmath>

namespace lisg {

namespace {

// splitmix64 finalizer; full 64-bit avalanche.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream,
                       StreamPurpose purpose) {
  key_ = mix(mix(mix(seed) ^ stream) ^ static_cast<std::uint64_t>(purpose));
}

std::uint64_t CounterRng::next_u64() { return mix(key_ ^ counter_++); }

double CounterRng::next_uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_uniform01();
}

double CounterRng::next_normal(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  double u = next_uniform01();
  while (u == 0.0) u = next_uniform01();
  const double v = next_uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * 3.14159265358979323846 * v;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return mean + stddev * radius * std::cos(angle);
}

}  // namespace lisg
