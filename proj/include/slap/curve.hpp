#pragma once

#include <optional>

#include "slap/sha256.hpp"
#include "slap/tower.hpp"

namespace slap::ff {

// BN254 G1: y^2 = x^3 + 3 over Fp, cofactor 1.
// G2: y^2 = x^3 + 3/xi over Fp2, r-torsion subgroup of the sextic twist.

inline Fp g1_b() { return Fp::from_u64(3); }

inline Fp2 g2_b() {
  static const Fp2 b = Fp2::xi().inverse().scale(Fp::from_u64(3));
  return b;
}

template <class F>
struct AffinePoint {
  F x{}, y{};
  bool infinity = true;

  static AffinePoint make(const F& x, const F& y) { return {x, y, false}; }

  friend bool operator==(const AffinePoint& a, const AffinePoint& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const AffinePoint& a, const AffinePoint& b) { return !(a == b); }
};

using G1Affine = AffinePoint<Fp>;
using G2Affine = AffinePoint<Fp2>;

// Jacobian coordinates: x = X/Z^2, y = Y/Z^3.
template <class F>
struct JacPoint {
  F X{}, Y{}, Z{};  // Z = 0 encodes infinity

  static JacPoint infinity() { return {}; }

  static JacPoint from_affine(const AffinePoint<F>& a) {
    if (a.infinity) return infinity();
    JacPoint p;
    p.X = a.x;
    p.Y = a.y;
    p.Z = field_one();
    return p;
  }

  bool is_infinity() const { return Z.is_zero(); }

  AffinePoint<F> to_affine() const {
    if (is_infinity()) return {};
    F zi = Z.inverse();
    F zi2 = zi.square();
    return AffinePoint<F>::make(X * zi2, Y * zi2 * zi);
  }

  JacPoint dbl() const {
    if (is_infinity()) return *this;
    F A = X.square();
    F B = Y.square();
    F C = B.square();
    F t = (X + B).square() - A - C;
    F D = t.dbl();
    F E = A.dbl() + A;
    F F_ = E.square();
    JacPoint r;
    r.X = F_ - D.dbl();
    r.Y = E * (D - r.X) - C.dbl().dbl().dbl();
    r.Z = (Y * Z).dbl();
    return r;
  }

  JacPoint add(const JacPoint& o) const {
    if (is_infinity()) return o;
    if (o.is_infinity()) return *this;
    F Z1Z1 = Z.square();
    F Z2Z2 = o.Z.square();
    F U1 = X * Z2Z2;
    F U2 = o.X * Z1Z1;
    F S1 = Y * Z2Z2 * o.Z;
    F S2 = o.Y * Z1Z1 * Z;
    if (U1 == U2) {
      if (S1 == S2) return dbl();
      return infinity();
    }
    F H = U2 - U1;
    F I = H.dbl().square();
    F J = H * I;
    F rr = (S2 - S1).dbl();
    F V = U1 * I;
    JacPoint out;
    out.X = rr.square() - J - V.dbl();
    out.Y = rr * (V - out.X) - (S1 * J).dbl();
    out.Z = ((Z + o.Z).square() - Z1Z1 - Z2Z2) * H;
    return out;
  }

  JacPoint add_affine(const AffinePoint<F>& o) const { return add(from_affine(o)); }

  JacPoint neg() const {
    JacPoint r = *this;
    r.Y = -r.Y;
    return r;
  }

  // 4-bit window scalar multiplication; exponent in plain form
  JacPoint mul(const U256& k) const {
    if (is_infinity() || k.is_zero()) return infinity();
    JacPoint table[16];
    table[0] = infinity();
    table[1] = *this;
    for (int i = 2; i < 16; ++i) table[i] = table[i - 1].add(*this);
    JacPoint acc = infinity();
    int top = k.bit_length();
    int nibbles = (top + 3) / 4;
    for (int i = nibbles - 1; i >= 0; --i) {
      if (!acc.is_infinity())
        for (int s = 0; s < 4; ++s) acc = acc.dbl();
      unsigned idx = 0;
      for (int b = 3; b >= 0; --b) idx = idx << 1 | unsigned(k.bit(4 * i + b));
      if (idx) acc = acc.add(table[idx]);
    }
    return acc;
  }

  JacPoint mul(const Fr& k) const { return mul(k.to_u256()); }

 private:
  static F field_one() { return F::one(); }
};

using G1 = JacPoint<Fp>;
using G2 = JacPoint<Fp2>;

inline bool on_curve_g1(const G1Affine& a) {
  if (a.infinity) return true;
  return a.y.square() == a.x.square() * a.x + g1_b();
}

inline bool on_curve_g2(const G2Affine& a) {
  if (a.infinity) return true;
  return a.y.square() == a.x.square() * a.x + g2_b();
}

inline G1Affine g1_generator() { return G1Affine::make(Fp::from_u64(1), Fp::from_u64(2)); }

inline G2Affine g2_generator() {
  static const G2Affine g = [] {
    Fp2 x{Fp::from_u256(U256::from_hex(
              "1800deef121f1e76426a00665e5c4479674322d4f75edadd46debd5cd992f6ed")),
          Fp::from_u256(U256::from_hex(
              "198e9393920d483a7260bfb731fb5d25f1aa493335a9e71297e485b7aef312c2"))};
    Fp2 y{Fp::from_u256(U256::from_hex(
              "12c85ea5db8c6deb4aab71808dcb408fe3d1e7690c43d37b4ce6cc0166fa7daa")),
          Fp::from_u256(U256::from_hex(
              "090689d0585ff075ec9e99ad690c3395bc4b313370b38ef355acdadcd122975b"))};
    return G2Affine::make(x, y);
  }();
  return g;
}

// ---- canonical encodings ----
// G1: 32 bytes, big-endian x with flag bits in the top byte
// (bit7 infinity, bit6 y sign). G2: 64 bytes, x.c1 || x.c0, same flags.
// Sign is the lexicographic comparison enc(y) > enc(-y).

inline constexpr size_t kG1Bytes = 32;
inline constexpr size_t kG2Bytes = 64;
inline constexpr size_t kScalarBytes = 32;
inline constexpr size_t kGtBytes = 384;

inline bool y_sign_g1(const Fp& y) {
  auto a = y.to_bytes_be();
  auto b = (-y).to_bytes_be();
  return a > b;
}

inline bool y_sign_g2(const Fp2& y) {
  auto a1 = y.c1.to_bytes_be();
  auto b1 = (-y).c1.to_bytes_be();
  if (a1 != b1) return a1 > b1;
  return y.c0.to_bytes_be() > (-y).c0.to_bytes_be();
}

inline Bytes g1_encode(const G1Affine& a) {
  Bytes out(kG1Bytes, 0);
  if (a.infinity) {
    out[0] = 0x80;
    return out;
  }
  auto xb = a.x.to_bytes_be();
  std::copy(xb.begin(), xb.end(), out.begin());
  if (y_sign_g1(a.y)) out[0] |= 0x40;
  return out;
}

inline G1Affine g1_decode(std::span<const uint8_t> in) {
  if (in.size() != kG1Bytes) throw Error(ErrorCode::bad_encoding, "G1: want 32 bytes");
  uint8_t flags = in[0] & 0xc0;
  if (flags & 0x80) {
    for (size_t i = 0; i < in.size(); ++i)
      if (in[i] != (i == 0 ? 0x80 : 0)) throw Error(ErrorCode::bad_encoding, "G1: bad infinity");
    return {};
  }
  Bytes xb(in.begin(), in.end());
  xb[0] &= 0x3f;
  Fp x = Fp::from_bytes_be(xb);
  Fp y;
  if (!(x.square() * x + g1_b()).sqrt(y)) throw Error(ErrorCode::bad_encoding, "G1: not on curve");
  if (y_sign_g1(y) != bool(flags & 0x40)) y = -y;
  return G1Affine::make(x, y);
}

inline Bytes g2_encode(const G2Affine& a) {
  Bytes out(kG2Bytes, 0);
  if (a.infinity) {
    out[0] = 0x80;
    return out;
  }
  auto c1 = a.x.c1.to_bytes_be();
  auto c0 = a.x.c0.to_bytes_be();
  std::copy(c1.begin(), c1.end(), out.begin());
  std::copy(c0.begin(), c0.end(), out.begin() + 32);
  if (y_sign_g2(a.y)) out[0] |= 0x40;
  return out;
}

inline G2Affine g2_decode(std::span<const uint8_t> in) {
  if (in.size() != kG2Bytes) throw Error(ErrorCode::bad_encoding, "G2: want 64 bytes");
  uint8_t flags = in[0] & 0xc0;
  if (flags & 0x80) {
    for (size_t i = 0; i < in.size(); ++i)
      if (in[i] != (i == 0 ? 0x80 : 0)) throw Error(ErrorCode::bad_encoding, "G2: bad infinity");
    return {};
  }
  Bytes c1(in.begin(), in.begin() + 32);
  c1[0] &= 0x3f;
  Fp2 x{Fp::from_bytes_be(std::span<const uint8_t>(in.data() + 32, 32)), Fp::from_bytes_be(c1)};
  Fp2 y;
  if (!(x.square() * x + g2_b()).sqrt(y)) throw Error(ErrorCode::bad_encoding, "G2: not on curve");
  if (y_sign_g2(y) != bool(flags & 0x40)) y = -y;
  G2Affine a = G2Affine::make(x, y);
  // subgroup check: the twist has cofactor > 1
  if (!G2::from_affine(a).mul(FrTag::ctx().mod).is_infinity())
    throw Error(ErrorCode::bad_encoding, "G2: not in r-torsion");
  return a;
}

inline Bytes scalar_encode(const Fr& s) {
  auto b = s.to_bytes_be();
  return Bytes(b.begin(), b.end());
}

inline Fr scalar_decode(std::span<const uint8_t> in) {
  if (in.size() != kScalarBytes) throw Error(ErrorCode::bad_encoding, "scalar: want 32 bytes");
  return Fr::from_bytes_be(in);
}

// Try-and-increment hash to G1; fine here, side channels are out of scope.
inline G1Affine hash_to_g1(std::string_view domain, std::span<const uint8_t> msg) {
  for (uint32_t ctr = 0;; ++ctr) {
    Bytes pre;
    append_u32be(pre, ctr);
    auto h1 = Sha256().update("slap.h2c.0").update(domain).update(std::span<const uint8_t>(pre)).update(msg).digest();
    auto h2 = Sha256().update("slap.h2c.1").update(domain).update(std::span<const uint8_t>(pre)).update(msg).digest();
    Bytes wide(h1.begin(), h1.end());
    wide.insert(wide.end(), h2.begin(), h2.end());
    Fp x = Fp::from_wide_bytes_be(wide);
    Fp y;
    if ((x.square() * x + g1_b()).sqrt(y)) {
      if (h2[31] & 1) y = -y;
      return G1Affine::make(x, y);
    }
  }
}

inline Fr hash_to_fr(std::string_view domain, std::span<const uint8_t> msg) {
  auto h1 = Sha256().update("slap.h2s.0").update(domain).update(msg).digest();
  auto h2 = Sha256().update("slap.h2s.1").update(domain).update(msg).digest();
  Bytes wide(h1.begin(), h1.end());
  wide.insert(wide.end(), h2.begin(), h2.end());
  return Fr::from_wide_bytes_be(wide);
}

}  // namespace slap::ff
