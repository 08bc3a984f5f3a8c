#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slap {

using Bytes = std::vector<uint8_t>;

enum class ErrorCode {
  bad_argument,
  bad_encoding,
  unsupported,
  parameter_ceiling,
  subset_violation,
  delegation_bound,
  depth_exceeded,
  modulus_reuse,
  out_of_range,
  no_coverage,
  ranging_inconsistent,
  channel_failure,
  internal,
};

/// Library-wide exception; protocol accept/reject verdicts are values, not throws.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
  ErrorCode code;
};

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline void append(Bytes& out, std::span<const uint8_t> more) {
  out.insert(out.end(), more.begin(), more.end());
}

inline void append_u8(Bytes& out, uint8_t v) { out.push_back(v); }

inline void append_u32be(Bytes& out, uint32_t v) {
  out.push_back(uint8_t(v >> 24));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v));
}

inline void append_u64be(Bytes& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

inline void append_f64be(Bytes& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  append_u64be(out, bits);
}

// Length-prefixed field: u32 big-endian length, then payload.
inline void append_field(Bytes& out, std::span<const uint8_t> f) {
  append_u32be(out, uint32_t(f.size()));
  append(out, f);
}

inline std::string hex_encode(std::span<const uint8_t> in) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(in.size() * 2);
  for (uint8_t b : in) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

inline Bytes hex_decode(std::string_view s) {
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (s.size() % 2) throw Error(ErrorCode::bad_encoding, "hex: odd length");
  Bytes out;
  out.reserve(s.size() / 2);
  for (size_t i = 0; i < s.size(); i += 2) {
    int hi = nib(s[i]), lo = nib(s[i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::bad_encoding, "hex: bad digit");
    out.push_back(uint8_t(hi << 4 | lo));
  }
  return out;
}

/// Sequential reader over a byte buffer for the wire formats.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  bool done() const { return pos_ == data_.size(); }
  size_t remaining() const { return data_.size() - pos_; }

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint32_t u32be() {
    need(4);
    uint32_t v = uint32_t(data_[pos_]) << 24 | uint32_t(data_[pos_ + 1]) << 16 |
                 uint32_t(data_[pos_ + 2]) << 8 | uint32_t(data_[pos_ + 3]);
    pos_ += 4;
    return v;
  }
  uint64_t u64be() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_ + i];
    pos_ += 8;
    return v;
  }
  double f64be() {
    uint64_t bits = u64be();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  Bytes fixed(size_t n) {
    need(n);
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
  }
  Bytes field() {
    uint32_t n = u32be();
    return fixed(n);
  }

 private:
  void need(size_t n) {
    if (pos_ + n > data_.size()) throw Error(ErrorCode::bad_encoding, "truncated message");
  }
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace slap
