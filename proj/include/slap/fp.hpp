#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>

#include "slap/bytes.hpp"
#include "slap/rng.hpp"

namespace slap::ff {

// 256-bit little-endian limb vector plus the carry helpers the Montgomery
// code needs. Not a general bignum; TLP-scale arithmetic lives on GMP.
struct U256 {
  uint64_t w[4] = {0, 0, 0, 0};

  static U256 from_u64(uint64_t v) { return U256{{v, 0, 0, 0}}; }

  static U256 from_hex(std::string_view s) {
    U256 r;
    int nib = 0;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
      char c = *it;
      uint64_t v;
      if (c >= '0' && c <= '9') v = uint64_t(c - '0');
      else if (c >= 'a' && c <= 'f') v = uint64_t(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v = uint64_t(c - 'A' + 10);
      else if (c == 'x' || c == 'X') break;
      else throw Error(ErrorCode::bad_argument, "U256::from_hex: bad digit");
      r.w[nib / 16] |= v << (4 * (nib % 16));
      if (++nib == 64) break;
    }
    return r;
  }

  static U256 from_bytes_be(std::span<const uint8_t> b) {
    if (b.size() != 32) throw Error(ErrorCode::bad_encoding, "U256: want 32 bytes");
    U256 r;
    for (int i = 0; i < 4; ++i) {
      uint64_t v = 0;
      for (int j = 0; j < 8; ++j) v = v << 8 | b[8 * (3 - i) + j];
      r.w[i] = v;
    }
    return r;
  }

  std::array<uint8_t, 32> to_bytes_be() const {
    std::array<uint8_t, 32> out;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 8; ++j) out[8 * (3 - i) + j] = uint8_t(w[i] >> (56 - 8 * j));
    return out;
  }

  bool is_zero() const { return !(w[0] | w[1] | w[2] | w[3]); }
  bool bit(int i) const { return (w[i / 64] >> (i % 64)) & 1; }

  int bit_length() const {
    for (int i = 3; i >= 0; --i)
      if (w[i]) return 64 * i + 64 - __builtin_clzll(w[i]);
    return 0;
  }

  bool odd() const { return w[0] & 1; }

  friend bool operator==(const U256& a, const U256& b) {
    return a.w[0] == b.w[0] && a.w[1] == b.w[1] && a.w[2] == b.w[2] && a.w[3] == b.w[3];
  }

  // a < b
  static bool lt(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
      if (a.w[i] != b.w[i]) return a.w[i] < b.w[i];
    }
    return false;
  }

  // r = a + b, returns carry
  static uint64_t add(U256& r, const U256& a, const U256& b) {
    unsigned __int128 c = 0;
    for (int i = 0; i < 4; ++i) {
      c += (unsigned __int128)a.w[i] + b.w[i];
      r.w[i] = uint64_t(c);
      c >>= 64;
    }
    return uint64_t(c);
  }

  // r = a - b, returns borrow
  static uint64_t sub(U256& r, const U256& a, const U256& b) {
    unsigned __int128 br = 0;
    for (int i = 0; i < 4; ++i) {
      unsigned __int128 d = (unsigned __int128)a.w[i] - b.w[i] - br;
      r.w[i] = uint64_t(d);
      br = (d >> 64) & 1;
    }
    return uint64_t(br);
  }

  U256 shr(unsigned n) const {
    U256 r;
    unsigned limb = n / 64, off = n % 64;
    for (int i = 0; i < 4; ++i) {
      uint64_t v = (i + limb < 4) ? w[i + limb] : 0;
      uint64_t hi = (off && i + limb + 1 < 4) ? w[i + limb + 1] : 0;
      r.w[i] = off ? (v >> off) | (hi << (64 - off)) : v;
    }
    return r;
  }

  // exact division by a small divisor
  U256 div_small(uint64_t d) const {
    U256 q;
    unsigned __int128 rem = 0;
    for (int i = 3; i >= 0; --i) {
      unsigned __int128 cur = (rem << 64) | w[i];
      q.w[i] = uint64_t(cur / d);
      rem = cur % d;
    }
    return q;
  }
};

struct MontCtx {
  U256 mod;
  U256 r2;     // 2^512 mod p
  U256 one;    // 2^256 mod p (Montgomery 1)
  uint64_t inv;  // -p^{-1} mod 2^64
  U256 exp_inv;   // p - 2
  U256 exp_sqrt;  // (p+1)/4, valid since p = 3 mod 4
  U256 exp_leg;   // (p-1)/2

  static MontCtx make(const U256& mod) {
    MontCtx c;
    c.mod = mod;
    // Newton iteration for -mod^{-1} mod 2^64
    uint64_t inv = 1;
    for (int i = 0; i < 63; ++i) inv *= 2 - mod.w[0] * inv;
    c.inv = ~inv + 1;
    // 2^256 mod p by 256 modular doublings of 1, then square it the same way
    U256 acc = U256::from_u64(1);
    auto dbl_mod = [&](U256& x) {
      uint64_t carry = U256::add(x, x, x);
      if (carry || !U256::lt(x, mod)) U256::sub(x, x, mod);
    };
    for (int i = 0; i < 256; ++i) dbl_mod(acc);
    c.one = acc;
    for (int i = 0; i < 256; ++i) dbl_mod(acc);
    c.r2 = acc;
    U256::sub(c.exp_inv, mod, U256::from_u64(2));
    U256 pm1;
    U256::sub(pm1, mod, U256::from_u64(1));
    c.exp_leg = pm1.shr(1);
    U256 pp1 = mod;
    U256::add(pp1, pp1, U256::from_u64(1));  // p+1 < 2^256 for our moduli
    c.exp_sqrt = pp1.shr(2);
    return c;
  }
};

// CIOS Montgomery multiplication, 4 limbs.
inline void mont_mul(uint64_t* out, const uint64_t* a, const uint64_t* b, const MontCtx& ctx) {
  const uint64_t* m = ctx.mod.w;
  uint64_t t[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    unsigned __int128 c = 0;
    for (int j = 0; j < 4; ++j) {
      c += (unsigned __int128)a[i] * b[j] + t[j];
      t[j] = uint64_t(c);
      c >>= 64;
    }
    c += t[4];
    t[4] = uint64_t(c);
    t[5] = uint64_t(c >> 64);

    uint64_t mu = t[0] * ctx.inv;
    c = (unsigned __int128)mu * m[0] + t[0];
    c >>= 64;
    for (int j = 1; j < 4; ++j) {
      c += (unsigned __int128)mu * m[j] + t[j];
      t[j - 1] = uint64_t(c);
      c >>= 64;
    }
    c += t[4];
    t[3] = uint64_t(c);
    t[4] = t[5] + uint64_t(c >> 64);
    t[5] = 0;
  }
  U256 r{{t[0], t[1], t[2], t[3]}};
  if (t[4] || !U256::lt(r, ctx.mod)) U256::sub(r, r, ctx.mod);
  std::memcpy(out, r.w, 32);
}

/// Prime-field element in Montgomery form. Tag supplies the modulus context.
template <class Tag>
class Fe {
 public:
  Fe() = default;

  static const MontCtx& ctx() { return Tag::ctx(); }

  static Fe zero() { return Fe{}; }
  static Fe one() {
    Fe r;
    r.v_ = ctx().one;
    return r;
  }

  static Fe from_u64(uint64_t x) {
    Fe r;
    r.v_ = U256::from_u64(x);
    return r.to_mont();
  }

  // canonical value (non-Montgomery), must be < modulus
  static Fe from_u256(const U256& x) {
    if (!U256::lt(x, ctx().mod)) throw Error(ErrorCode::bad_encoding, "field element >= modulus");
    Fe r;
    r.v_ = x;
    return r.to_mont();
  }

  static Fe from_bytes_be(std::span<const uint8_t> b) { return from_u256(U256::from_bytes_be(b)); }

  // 512-bit wide reduction: (hi*2^256 + lo) mod p. to_mont multiplies plain
  // limbs by 2^256 mod p, which is exactly the shift the hi half needs.
  static Fe from_wide_bytes_be(std::span<const uint8_t> b) {
    if (b.size() != 64) throw Error(ErrorCode::bad_encoding, "wide element: want 64 bytes");
    Fe hi, lo;
    hi.v_ = reduce_loose(U256::from_bytes_be(b.subspan(0, 32)));
    lo.v_ = reduce_loose(U256::from_bytes_be(b.subspan(32, 32)));
    Fe shifted;
    shifted.v_ = hi.to_mont().v_;  // plain value hi*2^256 mod p
    U256 sum;
    uint64_t carry = U256::add(sum, shifted.v_, lo.v_);
    if (carry || !U256::lt(sum, ctx().mod)) U256::sub(sum, sum, ctx().mod);
    Fe out;
    out.v_ = sum;
    return out.to_mont();
  }

  static Fe random(Drbg& rng) {
    for (;;) {
      Bytes b = rng.bytes(32);
      b[0] &= 0x3f;  // moduli are 254-bit
      U256 x = U256::from_bytes_be(b);
      if (U256::lt(x, ctx().mod)) {
        Fe r;
        r.v_ = x;
        return r.to_mont();
      }
    }
  }

  static Fe random_nonzero(Drbg& rng) {
    for (;;) {
      Fe r = random(rng);
      if (!r.is_zero()) return r;
    }
  }

  std::array<uint8_t, 32> to_bytes_be() const { return from_mont().v_.to_bytes_be(); }
  U256 to_u256() const { return from_mont().v_; }

  bool is_zero() const { return v_.is_zero(); }
  bool is_one() const { return v_ == ctx().one; }

  friend bool operator==(const Fe& a, const Fe& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Fe& a, const Fe& b) { return !(a.v_ == b.v_); }

  Fe operator+(const Fe& o) const {
    Fe r;
    uint64_t carry = U256::add(r.v_, v_, o.v_);
    if (carry || !U256::lt(r.v_, ctx().mod)) U256::sub(r.v_, r.v_, ctx().mod);
    return r;
  }

  Fe operator-(const Fe& o) const {
    Fe r;
    uint64_t borrow = U256::sub(r.v_, v_, o.v_);
    if (borrow) U256::add(r.v_, r.v_, ctx().mod);
    return r;
  }

  Fe operator-() const { return zero() - *this; }

  Fe operator*(const Fe& o) const {
    Fe r;
    mont_mul(r.v_.w, v_.w, o.v_.w, ctx());
    return r;
  }

  Fe& operator+=(const Fe& o) { return *this = *this + o; }
  Fe& operator-=(const Fe& o) { return *this = *this - o; }
  Fe& operator*=(const Fe& o) { return *this = *this * o; }

  Fe square() const { return *this * *this; }

  Fe dbl() const { return *this + *this; }

  Fe pow(const U256& e) const { return pow(std::span<const uint64_t>(e.w, 4)); }

  Fe pow(std::span<const uint64_t> e) const {
    Fe acc = one();
    bool started = false;
    for (int i = int(e.size()) - 1; i >= 0; --i) {
      for (int b = 63; b >= 0; --b) {
        if (started) acc = acc.square();
        if ((e[i] >> b) & 1) {
          if (started) acc = acc * *this;
          else {
            acc = *this;
            started = true;
          }
        }
      }
    }
    return started ? acc : one();
  }

  Fe inverse() const {
    if (is_zero()) throw Error(ErrorCode::bad_argument, "inverse of zero");
    return pow(ctx().exp_inv);
  }

  // 1 if QR, -1 if non-residue, 0 if zero
  int legendre() const {
    if (is_zero()) return 0;
    Fe l = pow(ctx().exp_leg);
    return l.is_one() ? 1 : -1;
  }

  // valid for p = 3 mod 4; returns false if no root
  bool sqrt(Fe& out) const {
    Fe cand = pow(ctx().exp_sqrt);
    if (cand.square() == *this) {
      out = cand;
      return true;
    }
    return false;
  }

 private:
  Fe to_mont() const {
    Fe r;
    mont_mul(r.v_.w, v_.w, ctx().r2.w, ctx());
    return r;
  }
  Fe from_mont() const {
    Fe r;
    U256 one_plain = U256::from_u64(1);
    mont_mul(r.v_.w, v_.w, one_plain.w, ctx());
    return r;
  }
  static U256 reduce_loose(U256 x) {
    while (!U256::lt(x, ctx().mod)) U256::sub(x, x, ctx().mod);
    return x;
  }

  U256 v_;
};

// BN254 (alt_bn128): p = 36u^4+36u^3+24u^2+6u+1, r = p - 6u^2, u the curve parameter.
inline constexpr uint64_t kBnU = 4965661367192848881ull;
inline constexpr const char* kBnPHex =
    "30644e72e131a029b85045b68181585d97816a916871ca8d3c208c16d87cfd47";
inline constexpr const char* kBnRHex =
    "30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001";

struct FpTag {
  static const MontCtx& ctx() {
    static const MontCtx c = MontCtx::make(U256::from_hex(kBnPHex));
    return c;
  }
};

struct FrTag {
  static const MontCtx& ctx() {
    static const MontCtx c = MontCtx::make(U256::from_hex(kBnRHex));
    return c;
  }
};

using Fp = Fe<FpTag>;
using Fr = Fe<FrTag>;

}  // namespace slap::ff
