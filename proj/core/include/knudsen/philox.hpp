#pragma once

#include <cstdint>
#include <cmath>

namespace knudsen {

// Philox4x32-10 counter-based generator. Each (key, counter) pair maps to an
// independent 128-bit block, so particle streams are reproducible regardless
// of how work is scheduled across threads.
struct Philox4x32 {
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  struct Block {
    std::uint32_t x[4];
  };

  static Block generate(std::uint64_t key, const std::uint32_t ctr[4]) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    std::uint32_t x0 = ctr[0], x1 = ctr[1], x2 = ctr[2], x3 = ctr[3];
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * x0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * x2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      x0 = hi1 ^ x1 ^ k0;
      x1 = lo1;
      x2 = hi0 ^ x3 ^ k1;
      x3 = lo0;
      k0 += kW0;
      k1 += kW1;
    }
    return Block{{x0, x1, x2, x3}};
  }
};

// Stream of doubles addressed by (seed, stream_id, substream). A particle
// uses stream_id = its index; substream tags the boundary event (collision
// count) or a reserved purpose such as initial sampling. Blocks within a
// substream are consumed sequentially, so rejection loops may draw freely.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t substream)
      : seed_(seed), cursor_(2) {
    ctr_[0] = static_cast<std::uint32_t>(stream_id);
    ctr_[1] = static_cast<std::uint32_t>(stream_id >> 32);
    ctr_[2] = substream;
    ctr_[3] = 0;
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() {
    const std::uint64_t bits = next64();
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  std::uint64_t next64() {
    if (cursor_ >= 2) {
      block_ = Philox4x32::generate(seed_, ctr_);
      ++ctr_[3];
      cursor_ = 0;
    }
    const std::uint64_t lo = block_.x[2 * cursor_];
    const std::uint64_t hi = block_.x[2 * cursor_ + 1];
    ++cursor_;
    return (hi << 32) | lo;
  }

 private:
  std::uint64_t seed_;
  std::uint32_t ctr_[4];
  Philox4x32::Block block_{};
  int cursor_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Substream tags outside the collision-count range.
inline constexpr std::uint32_t kSubstreamInitial = 0xFFFFFFFFu;
inline constexpr std::uint32_t kSubstreamBootstrap = 0xFFFFFFFEu;

}  // namespace knudsen
