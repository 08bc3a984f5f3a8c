#pragma once

#include "slap/fp.hpp"

namespace slap::ff {

// Tower: Fp2 = Fp[i]/(i^2+1), Fp6 = Fp2[v]/(v^3 - xi) with xi = 9+i,
// Fp12 = Fp6[w]/(w^2 - v).

struct Fp2 {
  Fp c0, c1;

  static Fp2 zero() { return {}; }
  static Fp2 one() { return {Fp::one(), Fp::zero()}; }
  static Fp2 xi() { return {Fp::from_u64(9), Fp::one()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool is_one() const { return c0.is_one() && c1.is_zero(); }

  friend bool operator==(const Fp2& a, const Fp2& b) { return a.c0 == b.c0 && a.c1 == b.c1; }
  friend bool operator!=(const Fp2& a, const Fp2& b) { return !(a == b); }

  Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
  Fp2 operator-() const { return {-c0, -c1}; }

  Fp2 operator*(const Fp2& o) const {
    // Karatsuba over the quadratic extension
    Fp a = c0 * o.c0;
    Fp b = c1 * o.c1;
    Fp t = (c0 + c1) * (o.c0 + o.c1);
    return {a - b, t - a - b};
  }

  Fp2 scale(const Fp& k) const { return {c0 * k, c1 * k}; }

  Fp2 square() const {
    Fp t0 = (c0 + c1) * (c0 - c1);
    Fp t1 = (c0 * c1).dbl();
    return {t0, t1};
  }

  Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

  Fp2 conj() const { return {c0, -c1}; }

  Fp norm() const { return c0 * c0 + c1 * c1; }

  Fp2 inverse() const {
    Fp n = norm().inverse();
    return {c0 * n, -(c1 * n)};
  }

  // multiply by xi = 9 + i
  Fp2 mul_by_xi() const {
    Fp nine_c0 = c0.dbl().dbl().dbl() + c0;
    Fp nine_c1 = c1.dbl().dbl().dbl() + c1;
    return {nine_c0 - c1, nine_c1 + c0};
  }

  Fp2 pow(const U256& e) const {
    Fp2 acc = one();
    bool started = false;
    for (int i = e.bit_length() - 1; i >= 0; --i) {
      if (started) acc = acc.square();
      if (e.bit(i)) {
        if (started) acc = acc * *this;
        else {
          acc = *this;
          started = true;
        }
      }
    }
    return acc;
  }

  // Square root for p = 3 mod 4; returns false when no root exists.
  bool sqrt(Fp2& out) const {
    if (is_zero()) {
      out = zero();
      return true;
    }
    if (c1.is_zero()) {
      Fp r;
      if (c0.sqrt(r)) {
        out = {r, Fp::zero()};
        return true;
      }
      if ((-c0).sqrt(r)) {
        out = {Fp::zero(), r};
        return true;
      }
      return false;
    }
    Fp lambda;
    if (!norm().sqrt(lambda)) return false;
    Fp half = Fp::from_u64(2).inverse();
    Fp delta = (c0 + lambda) * half;
    Fp x0;
    if (!delta.sqrt(x0)) {
      delta = (c0 - lambda) * half;
      if (!delta.sqrt(x0)) return false;
    }
    Fp x1 = c1 * (x0.dbl()).inverse();
    Fp2 cand{x0, x1};
    if (cand.square() == *this) {
      out = cand;
      return true;
    }
    return false;
  }

  static Fp2 random(Drbg& rng) { return {Fp::random(rng), Fp::random(rng)}; }
};

// Frobenius coefficients gamma1[i] = xi^{i(p-1)/6}; gamma2, gamma3 derived.
struct TowerCtx {
  Fp2 g1[6];  // index 1..5 used
  Fp g2[6];   // gamma2[i] = N(gamma1[i]) in Fp
  Fp2 g3[6];  // gamma3[i] = gamma1[i] * gamma2[i]

  static const TowerCtx& get() {
    static const TowerCtx c = make();
    return c;
  }

 private:
  static TowerCtx make() {
    TowerCtx c;
    U256 p = FpTag::ctx().mod;
    U256 pm1;
    U256::sub(pm1, p, U256::from_u64(1));
    U256 e = pm1.div_small(6);
    Fp2 base = Fp2::xi().pow(e);
    c.g1[0] = Fp2::one();
    for (int i = 1; i < 6; ++i) c.g1[i] = c.g1[i - 1] * base;
    for (int i = 1; i < 6; ++i) {
      c.g2[i] = c.g1[i].norm();  // gamma1^(p+1) = conj * self
      c.g3[i] = c.g1[i].scale(c.g2[i]);
    }
    return c;
  }
};

struct Fp6 {
  Fp2 c0, c1, c2;

  static Fp6 zero() { return {}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }

  friend bool operator==(const Fp6& a, const Fp6& b) {
    return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2;
  }

  Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
  Fp6 operator-() const { return {-c0, -c1, -c2}; }

  Fp6 operator*(const Fp6& o) const {
    Fp2 t0 = c0 * o.c0;
    Fp2 t1 = c1 * o.c1;
    Fp2 t2 = c2 * o.c2;
    Fp2 r0 = ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi() + t0;
    Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi();
    Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1;
    return {r0, r1, r2};
  }

  Fp6 square() const { return *this * *this; }

  Fp6 dbl() const { return {c0.dbl(), c1.dbl(), c2.dbl()}; }

  Fp6 scale2(const Fp2& k) const { return {c0 * k, c1 * k, c2 * k}; }

  // multiply by v
  Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

  Fp6 inverse() const {
    Fp2 a = c0.square() - (c1 * c2).mul_by_xi();
    Fp2 b = c2.square().mul_by_xi() - c0 * c1;
    Fp2 c = c1.square() - c0 * c2;
    Fp2 t = ((c2 * b + c1 * c).mul_by_xi() + c0 * a).inverse();
    return {a * t, b * t, c * t};
  }

  Fp6 frob1() const {
    const auto& T = TowerCtx::get();
    return {c0.conj(), c1.conj() * T.g1[2], c2.conj() * T.g1[4]};
  }
  Fp6 frob2() const {
    const auto& T = TowerCtx::get();
    return {c0, c1.scale(T.g2[2]), c2.scale(T.g2[4])};
  }
  Fp6 frob3() const {
    const auto& T = TowerCtx::get();
    return {c0.conj(), c1.conj() * T.g3[2], c2.conj() * T.g3[4]};
  }
};

struct Fp12 {
  Fp6 c0, c1;

  static Fp12 zero() { return {}; }
  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

  bool is_one() const { return c0 == Fp6::one() && c1.is_zero(); }

  friend bool operator==(const Fp12& a, const Fp12& b) { return a.c0 == b.c0 && a.c1 == b.c1; }
  friend bool operator!=(const Fp12& a, const Fp12& b) { return !(a == b); }

  Fp12 operator*(const Fp12& o) const {
    Fp6 t0 = c0 * o.c0;
    Fp6 t1 = c1 * o.c1;
    Fp6 mid = (c0 + c1) * (o.c0 + o.c1) - t0 - t1;
    return {t0 + t1.mul_by_v(), mid};
  }

  Fp12 square() const {
    // complex squaring over the quadratic extension
    Fp6 a = c0 + c1;
    Fp6 b = c0 + c1.mul_by_v();
    Fp6 t = c0 * c1;
    Fp6 r0 = a * b - t - t.mul_by_v();
    return {r0, t.dbl()};
  }

  Fp12 dblc() const { return {c0 + c0, c1 + c1}; }

  Fp12 inverse() const {
    Fp6 t = (c0.square() - c1.square().mul_by_v()).inverse();
    return {c0 * t, -(c1 * t)};
  }

  // x^{p^6}: inverse on the cyclotomic subgroup
  Fp12 conj() const { return {c0, -c1}; }

  Fp12 frob1() const {
    const auto& T = TowerCtx::get();
    Fp6 a = c0.frob1();
    Fp6 b = c1.frob1().scale2(T.g1[1]);
    return {a, b};
  }
  Fp12 frob2() const {
    const auto& T = TowerCtx::get();
    Fp6 a = c0.frob2();
    Fp6 b = c1.frob2();
    return {a, {b.c0.scale(T.g2[1]), b.c1.scale(T.g2[1]), b.c2.scale(T.g2[1])}};
  }
  Fp12 frob3() const {
    const auto& T = TowerCtx::get();
    Fp6 a = c0.frob3();
    Fp6 b = c1.frob3().scale2(T.g3[1]);
    return {a, b};
  }

  Fp12 pow(std::span<const uint64_t> e) const {
    Fp12 acc = one();
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

  Fp12 pow(const U256& e) const { return pow(std::span<const uint64_t>(e.w, 4)); }

  Fp12 pow_u64(uint64_t e) const {
    uint64_t w[1] = {e};
    return pow(std::span<const uint64_t>(w, 1));
  }
};

}  // namespace slap::ff
