#pragma once

#include <cstdint>

namespace lisg {

/// Purpose tags splitting one seed into independent streams.
enum class StreamPurpose : std::uint64_t {
  TargetCenters = 1,
  TargetCoefficients = 2,
  ErrorSamples = 3,
  McDesign = 4,
  Generic = 99,
};

/// Counter-based generator: the n-th output is a mix of (seed, stream,
/// purpose, n), so streams are independent, reproducible, and cheap to
/// split. Normal deviates use Box-Muller on consecutive counter pairs.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, StreamPurpose purpose);

  std::uint64_t next_u64();
  double next_uniform01();                       // in [0, 1)
  double next_uniform(double lo, double hi);
  double next_normal(double mean, double stddev);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lisg
