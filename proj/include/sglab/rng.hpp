#pragma once

#include <cstdint>

namespace sglab {

// Counter-based generator: the value at position n is a pure function of
// (seed, stream, n). Any position is computable in O(1), so shifted views and
// parallel workers reproduce the same sequence without shared state.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept {
    base_ = mix(seed + 0x9e3779b97f4a7c15ull);
    base_ ^= mix(stream * 0xd1b54a32d192ed03ull + 0x8cb92ba72f3d8dd7ull);
  }

  std::uint64_t bits_at(std::uint64_t index) const noexcept {
    return mix(base_ + (index + 1) * 0x9e3779b97f4a7c15ull);
  }

  // Uniform double in [0,1), 53 significant bits.
  double uniform_at(std::uint64_t index) const noexcept {
    return static_cast<double>(bits_at(index) >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) via 128-bit multiply.
  std::uint64_t below_at(std::uint64_t index, std::uint64_t bound) const noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits_at(index)) * bound) >> 64);
  }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

private:
  std::uint64_t base_;
};

// Sequential cursor over a CounterRng.
class RngCursor {
public:
  RngCursor(std::uint64_t seed, std::uint64_t stream) noexcept : rng_(seed, stream) {}
  explicit RngCursor(CounterRng rng) noexcept : rng_(rng) {}

  std::uint64_t next_bits() noexcept { return rng_.bits_at(pos_++); }
  double next_uniform() noexcept { return rng_.uniform_at(pos_++); }
  std::uint64_t next_below(std::uint64_t bound) noexcept { return rng_.below_at(pos_++, bound); }
  std::uint64_t position() const noexcept { return pos_; }

private:
  CounterRng rng_;
  std::uint64_t pos_ = 0;
};

// Stream-id salts keep draw purposes disjoint within one experiment seed.
namespace stream_salt {
inline constexpr std::uint64_t omega = 0x01ull << 56;
inline constexpr std::uint64_t point = 0x02ull << 56;
inline constexpr std::uint64_t aux = 0x03ull << 56;
}  // namespace stream_salt

}  // namespace sglab
