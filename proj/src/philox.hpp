#pragma once

// Philox4x32-10 counter-based generator. A stream is addressed by (seed, sample id),
// so results do not depend on how samples are split across workers.

#include <array>
#include <cmath>
#include <cstdint>

namespace gg {

class Philox {
 public:
  Philox(uint64_t seed, uint64_t stream, uint32_t sub = 0)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        ctr_{static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32), sub, 0} {}

  uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  uint64_t next_u64() {
    uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // (0, 1)
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  uint64_t below(uint64_t n) { return static_cast<uint64_t>(uniform() * static_cast<double>(n)) % n; }

  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> x, std::array<uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
      uint64_t p0 = static_cast<uint64_t>(0xD2511F53u) * x[0];
      uint64_t p1 = static_cast<uint64_t>(0xCD9E8D57u) * x[2];
      x = {static_cast<uint32_t>(p1 >> 32) ^ x[1] ^ k[0], static_cast<uint32_t>(p1),
           static_cast<uint32_t>(p0 >> 32) ^ x[3] ^ k[1], static_cast<uint32_t>(p0)};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return x;
  }

 private:
  void refill() {
    buf_ = block(ctr_, key_);
    pos_ = 0;
    ++ctr_[3];
  }

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> ctr_;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace gg
