#pragma once

#include <cstdint>
#include <random>

namespace palcanon {

/// Reproducible random stream identified by (seed, stream_id).
///
/// Backed by std::mt19937_64 seeded through std::seed_seq, both of which the
/// standard specifies bit-exactly, so a given (seed, stream_id) produces the
/// same sequence on every conforming platform. The conversions to doubles and
/// bounded integers are done here rather than with the std distributions,
/// whose algorithms are implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on {1, ..., m}; unbiased (rejection sampling).
  std::uint64_t uniform_int1(std::uint64_t m);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace palcanon
