#pragma once

#include <utility>
#include <vector>

#include "slap/curve.hpp"

namespace slap::ff {

// Optimal ate pairing on BN254. The Miller loop runs over 6u+2 with the two
// Frobenius correction steps; lines are evaluated against the untwist
// (x, y) -> (x w^2, y w^3), giving sparse coefficients at w^0, w^1, w^3.

namespace detail {

// line as Fp12 given coefficients at w^0, w^1, w^3
inline Fp12 line_element(const Fp2& l0, const Fp2& l1, const Fp2& l3) {
  Fp12 r;
  r.c0.c0 = l0;
  r.c1.c0 = l1;
  r.c1.c1 = l3;
  return r;
}

// Doubling step: T <- 2T, returns tangent line at old T evaluated at P.
inline Fp12 dbl_step(G2& T, const G1Affine& P) {
  Fp2 A = T.X.square();
  Fp2 B = T.Y.square();
  Fp2 C = B.square();
  Fp2 Zsq = T.Z.square();
  Fp2 D = ((T.X + B).square() - A - C).dbl();
  Fp2 E = A.dbl() + A;
  Fp2 F = E.square();
  Fp2 X3 = F - D.dbl();
  Fp2 Y3 = E * (D - X3) - C.dbl().dbl().dbl();
  Fp2 Z3 = (T.Y * T.Z).dbl();
  Fp2 l0 = (Z3 * Zsq).scale(P.y);
  Fp2 l1 = -(E * Zsq).scale(P.x);
  Fp2 l3 = E * T.X - B.dbl();
  T.X = X3;
  T.Y = Y3;
  T.Z = Z3;
  return line_element(l0, l1, l3);
}

// Mixed addition step: T <- T + Q, returns chord line through T,Q at P.
inline Fp12 add_step(G2& T, const G2Affine& Q, const G1Affine& P) {
  Fp2 Z1Z1 = T.Z.square();
  Fp2 U2 = Q.x * Z1Z1;
  Fp2 S2 = Q.y * Z1Z1 * T.Z;
  Fp2 H = U2 - T.X;
  Fp2 R = S2 - T.Y;
  if (H.is_zero()) throw Error(ErrorCode::internal, "pairing: degenerate addition");
  Fp2 HH = H.square();
  Fp2 HHH = H * HH;
  Fp2 V = T.X * HH;
  Fp2 X3 = R.square() - HHH - V.dbl();
  Fp2 Y3 = R * (V - X3) - T.Y * HHH;
  Fp2 Z3 = T.Z * H;
  Fp2 l0 = Z3.scale(P.y);
  Fp2 l1 = -R.scale(P.x);
  Fp2 l3 = R * Q.x - Z3 * Q.y;
  T.X = X3;
  T.Y = Y3;
  T.Z = Z3;
  return line_element(l0, l1, l3);
}

// untwist-Frobenius-twist endomorphism
inline G2Affine g2_psi(const G2Affine& q) {
  const auto& T = TowerCtx::get();
  return G2Affine::make(q.x.conj() * T.g1[2], q.y.conj() * T.g1[3]);
}

inline Fp12 miller_single(const G1Affine& P, const G2Affine& Q) {
  if (P.infinity || Q.infinity) return Fp12::one();
  // 6u+2
  U256 loop = U256::from_u64(kBnU);
  {
    U256 six = U256::from_u64(6);
    // 6u + 2 fits in 65 bits; cheap schoolbook
    unsigned __int128 prod = (unsigned __int128)kBnU * 6 + 2;
    loop.w[0] = uint64_t(prod);
    loop.w[1] = uint64_t(prod >> 64);
    loop.w[2] = loop.w[3] = 0;
    (void)six;
  }
  G2 T = G2::from_affine(Q);
  Fp12 f = Fp12::one();
  for (int i = loop.bit_length() - 2; i >= 0; --i) {
    f = f.square() * dbl_step(T, P);
    if (loop.bit(i)) f = f * add_step(T, Q, P);
  }
  G2Affine q1 = g2_psi(Q);
  G2Affine q2 = g2_psi(q1);
  q2.y = -q2.y;
  f = f * add_step(T, q1, P);
  f = f * add_step(T, q2, P);
  return f;
}

inline Fp12 exp_by_u(const Fp12& f) { return f.pow_u64(kBnU); }

}  // namespace detail

/// Final exponentiation: easy part then the hard-part addition chain.
inline Fp12 final_exponentiation(const Fp12& f) {
  // easy: f^{(p^6 - 1)(p^2 + 1)}
  Fp12 t = f.conj() * f.inverse();
  t = t.frob2() * t;
  // hard: f^{(p^4 - p^2 + 1)/r}
  Fp12 fx = detail::exp_by_u(t);
  Fp12 fx2 = detail::exp_by_u(fx);
  Fp12 fx3 = detail::exp_by_u(fx2);
  Fp12 y0 = t.frob1() * t.frob2() * t.frob3();
  Fp12 y1 = t.conj();
  Fp12 y2 = fx2.frob2();
  Fp12 y3 = fx.frob1().conj();
  Fp12 y4 = (fx * fx2.frob1()).conj();
  Fp12 y5 = fx2.conj();
  Fp12 y6 = (fx3 * fx3.frob1()).conj();
  Fp12 T0 = y6.square() * y4 * y5;
  Fp12 T1 = y3 * y5 * T0;
  T0 = T0 * y2;
  T1 = T1.square() * T0;
  T1 = T1.square();
  T0 = T1 * y1;
  T1 = T1 * y0;
  T0 = T0.square();
  T0 = T0 * T1;
  return T0;
}

inline Fp12 pairing(const G1Affine& P, const G2Affine& Q) {
  return final_exponentiation(detail::miller_single(P, Q));
}

inline Fp12 miller_product(std::span<const std::pair<G1Affine, G2Affine>> pairs) {
  Fp12 f = Fp12::one();
  for (const auto& [p, q] : pairs) f = f * detail::miller_single(p, q);
  return f;
}

/// Checks prod e(P_i, Q_i) == 1 with a single final exponentiation.
inline bool pairing_product_is_one(std::span<const std::pair<G1Affine, G2Affine>> pairs) {
  return final_exponentiation(miller_product(pairs)).is_one();
}

inline Bytes gt_encode(const Fp12& f) {
  Bytes out;
  out.reserve(kGtBytes);
  auto put2 = [&](const Fp2& e) {
    auto a = e.c0.to_bytes_be();
    auto b = e.c1.to_bytes_be();
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
  };
  put2(f.c0.c0);
  put2(f.c0.c1);
  put2(f.c0.c2);
  put2(f.c1.c0);
  put2(f.c1.c1);
  put2(f.c1.c2);
  return out;
}

inline Fp12 gt_decode(std::span<const uint8_t> in) {
  if (in.size() != kGtBytes) throw Error(ErrorCode::bad_encoding, "GT: want 384 bytes");
  size_t off = 0;
  auto get2 = [&]() {
    Fp2 e{Fp::from_bytes_be(in.subspan(off, 32)), Fp::from_bytes_be(in.subspan(off + 32, 32))};
    off += 64;
    return e;
  };
  Fp12 f;
  f.c0.c0 = get2();
  f.c0.c1 = get2();
  f.c0.c2 = get2();
  f.c1.c0 = get2();
  f.c1.c1 = get2();
  f.c1.c2 = get2();
  return f;
}

}  // namespace slap::ff
