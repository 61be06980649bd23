#include "palcanon/rng.hpp"

#include <limits>

#include "palcanon/error.hpp"

namespace palcanon {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x70616c63u};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int1(std::uint64_t m) {
  if (m == 0) throw ValidationError("uniform_int1: m must be positive");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % m + 1) % m;  // accept x <= limit
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return 1 + x % m;
}

}  // namespace palcanon
