#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>

#include "slap/bytes.hpp"

namespace slap {

/// Incremental SHA-256 (FIPS 180-4).
class Sha256 {
 public:
  static constexpr size_t kDigestSize = 32;

  Sha256() { reset(); }

  void reset() {
    state_ = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
              0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
    total_ = 0;
    buffered_ = 0;
  }

  Sha256& update(std::span<const uint8_t> data) {
    total_ += data.size();
    size_t off = 0;
    if (buffered_) {
      size_t take = std::min(data.size(), size_t(64) - buffered_);
      std::memcpy(buf_.data() + buffered_, data.data(), take);
      buffered_ += take;
      off = take;
      if (buffered_ == 64) {
        compress(buf_.data());
        buffered_ = 0;
      }
    }
    while (off + 64 <= data.size()) {
      compress(data.data() + off);
      off += 64;
    }
    if (off < data.size()) {
      std::memcpy(buf_.data(), data.data() + off, data.size() - off);
      buffered_ = data.size() - off;
    }
    return *this;
  }

  Sha256& update(std::string_view s) {
    return update(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
  }

  std::array<uint8_t, 32> digest() const {
    Sha256 copy = *this;
    uint64_t bitlen = copy.total_ * 8;
    uint8_t pad = 0x80;
    copy.update(std::span<const uint8_t>(&pad, 1));
    static const uint8_t zeros[64] = {};
    size_t padlen = (copy.buffered_ <= 56) ? 56 - copy.buffered_ : 120 - copy.buffered_;
    copy.update(std::span<const uint8_t>(zeros, padlen));
    uint8_t len[8];
    for (int i = 0; i < 8; ++i) len[i] = uint8_t(bitlen >> (56 - 8 * i));
    copy.update(std::span<const uint8_t>(len, 8));
    std::array<uint8_t, 32> out;
    for (int i = 0; i < 8; ++i) {
      out[4 * i] = uint8_t(copy.state_[i] >> 24);
      out[4 * i + 1] = uint8_t(copy.state_[i] >> 16);
      out[4 * i + 2] = uint8_t(copy.state_[i] >> 8);
      out[4 * i + 3] = uint8_t(copy.state_[i]);
    }
    return out;
  }

  static std::array<uint8_t, 32> hash(std::span<const uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.digest();
  }

 private:
  static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

  void compress(const uint8_t* block) {
    static constexpr uint32_t K[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};
    uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = uint32_t(block[4 * i]) << 24 | uint32_t(block[4 * i + 1]) << 16 |
             uint32_t(block[4 * i + 2]) << 8 | uint32_t(block[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
    for (int i = 0; i < 64; ++i) {
      uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      uint32_t ch = (e & f) ^ (~e & g);
      uint32_t t1 = h + S1 + ch + K[i] + w[i];
      uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      uint32_t t2 = S0 + maj;
      h = g; g = f; f = e; e = d + t1;
      d = c; c = b; b = a; a = t1 + t2;
    }
    state_[0] += a; state_[1] += b; state_[2] += c; state_[3] += d;
    state_[4] += e; state_[5] += f; state_[6] += g; state_[7] += h;
  }

  std::array<uint32_t, 8> state_;
  std::array<uint8_t, 64> buf_;
  uint64_t total_ = 0;
  size_t buffered_ = 0;
};

inline std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) { return Sha256::hash(data); }

inline std::array<uint8_t, 32> sha256(std::string_view s) {
  return Sha256::hash(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

}  // namespace slap
