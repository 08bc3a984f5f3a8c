#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "slap/bytes.hpp"
#include "slap/sha256.hpp"

namespace slap {

/// Deterministic hash-counter DRBG. Every randomized operation in the stack
/// takes one of these, so a scenario seed pins the whole run.
class Drbg {
 public:
  explicit Drbg(uint64_t seed) {
    Bytes s;
    append_u64be(s, seed);
    key_ = Sha256().update("slap.drbg.seed").update(std::span<const uint8_t>(s)).digest();
  }

  explicit Drbg(std::span<const uint8_t> seed) {
    key_ = Sha256().update("slap.drbg.seed").update(seed).digest();
  }

  /// Independent child stream; safe to use in any order relative to the parent.
  Drbg fork(std::string_view tag) const {
    Drbg child;
    child.key_ = Sha256()
                     .update("slap.drbg.fork")
                     .update(std::span<const uint8_t>(key_.data(), key_.size()))
                     .update(tag)
                     .digest();
    return child;
  }

  void fill(std::span<uint8_t> out) {
    size_t off = 0;
    while (off < out.size()) {
      Bytes ctr;
      append_u64be(ctr, counter_++);
      auto block = Sha256()
                       .update(std::span<const uint8_t>(key_.data(), key_.size()))
                       .update(std::span<const uint8_t>(ctr))
                       .digest();
      size_t take = std::min(out.size() - off, block.size());
      std::memcpy(out.data() + off, block.data(), take);
      off += take;
    }
  }

  Bytes bytes(size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  uint64_t u64() {
    uint8_t b[8];
    fill(b);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | b[i];
    return v;
  }

  /// Uniform in [0, bound) by rejection; bound > 0.
  uint64_t uniform(uint64_t bound) {
    uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
      uint64_t v = u64();
      if (v < limit) return v % bound;
    }
  }

  bool coin() { return u64() & 1; }

  double unit_double() { return double(u64() >> 11) * (1.0 / 9007199254740992.0); }

 private:
  Drbg() = default;
  std::array<uint8_t, 32> key_{};
  uint64_t counter_ = 0;
};

}  // namespace slap
