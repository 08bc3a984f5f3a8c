#pragma once

#include <utility>
#include <vector>

#include "slap/group.hpp"

namespace slap::gs {

using ff::Fr;
using ff::G1;
using ff::G2;
using ff::G1Affine;
using ff::G2Affine;

/// BBS parameters: generator g1, message basis h1[ell], generator g2.
struct GsParams {
  size_t ell = 0;
  G1Affine g1;
  std::vector<G1Affine> h1;
  G2Affine g2;
};

struct GsKeys {
  Fr sk;        // x
  G2Affine gk;  // X2 = g2^x
};

/// sigma = (A, e_bar), 64 bytes encoded.
struct GroupSignature {
  G1Affine a;
  Fr e_bar;
};

inline GsParams gs_setup(size_t ell, uint64_t seed) {
  if (ell < 1) throw Error(ErrorCode::bad_argument, "gs_setup: ell must be >= 1");
  GsParams p;
  p.ell = ell;
  p.g1 = ff::g1_generator();
  p.g2 = ff::g2_generator();
  p.h1.reserve(ell);
  Bytes seed_b;
  append_u64be(seed_b, seed);
  for (size_t i = 0; i < ell; ++i) {
    Bytes msg = seed_b;
    append_u32be(msg, uint32_t(i));
    p.h1.push_back(ff::hash_to_g1("slap.gs.h1", msg));
  }
  return p;
}

inline GsKeys gs_keygen(const GsParams&, Drbg& rng) {
  GsKeys k;
  k.sk = Fr::random_nonzero(rng);
  k.gk = grp::g2_mul_gen(k.sk);
  return k;
}

inline G1Affine message_commitment(const GsParams& p, std::span<const Fr> m) {
  if (m.size() > p.ell) throw Error(ErrorCode::bad_argument, "gs: message vector too long");
  G1 acc = G1::from_affine(p.g1);
  for (size_t i = 0; i < m.size(); ++i)
    acc = acc.add(G1::from_affine(p.h1[i]).mul(m[i]));
  return acc.to_affine();
}

inline GroupSignature gs_sign(const GsParams& p, const GsKeys& keys, std::span<const Fr> m,
                              Drbg& rng) {
  G1Affine c = message_commitment(p, m);
  for (;;) {
    Fr e_bar = Fr::random(rng);
    Fr denom = keys.sk + e_bar;
    if (denom.is_zero()) continue;  // e_bar == -x, resample
    G1Affine a = G1::from_affine(c).mul(denom.inverse()).to_affine();
    return GroupSignature{a, e_bar};
  }
}

inline bool gs_verify(const GsParams& p, const G2Affine& gk, std::span<const Fr> m,
                      const GroupSignature& sig) {
  if (sig.a.infinity) return false;
  G1Affine c = message_commitment(p, m);
  // e(A, g2^e_bar * GK) == e(C, g2)
  G2Affine rhs2 = G2::from_affine(p.g2).mul(sig.e_bar).add(G2::from_affine(gk)).to_affine();
  G1Affine c_neg = G1::from_affine(c).neg().to_affine();
  std::vector<std::pair<G1Affine, G2Affine>> pairs = {{sig.a, rhs2}, {c_neg, p.g2}};
  return ff::pairing_product_is_one(pairs);
}

struct BatchResult {
  bool ok = false;
  long first_failure = -1;  // index of first failing item when !ok
};

/// Randomized linear-combination batch; falls back to per-item verification
/// to locate the first failure.
inline BatchResult gs_batch_verify(const GsParams& p, const G2Affine& gk,
                                   std::span<const std::pair<std::vector<Fr>, GroupSignature>> items,
                                   Drbg& rng) {
  if (items.empty()) throw Error(ErrorCode::bad_argument, "gs_batch_verify: empty batch");
  // prod_j [ e(A_j, g2)^{r_j e_j} e(A_j, GK)^{r_j} e(C_j, g2)^{-r_j} ] == 1
  G1 acc_g2_side = G1::infinity();
  G1 acc_gk_side = G1::infinity();
  bool degenerate = false;
  for (const auto& [m, sig] : items) {
    if (sig.a.infinity) degenerate = true;
  }
  if (!degenerate) {
    for (const auto& [m, sig] : items) {
      Fr r = Fr::random_nonzero(rng);
      G1Affine c = message_commitment(p, m);
      acc_g2_side = acc_g2_side.add(G1::from_affine(sig.a).mul(r * sig.e_bar));
      acc_g2_side = acc_g2_side.add(G1::from_affine(c).mul(r).neg());
      acc_gk_side = acc_gk_side.add(G1::from_affine(sig.a).mul(r));
    }
    std::vector<std::pair<G1Affine, G2Affine>> pairs = {
        {acc_g2_side.to_affine(), p.g2}, {acc_gk_side.to_affine(), gk}};
    if (ff::pairing_product_is_one(pairs)) return {true, -1};
  }
  for (size_t j = 0; j < items.size(); ++j)
    if (!gs_verify(p, gk, items[j].first, items[j].second)) return {false, long(j)};
  // batch said no but every item passes: treat as pass
  return {true, -1};
}

inline Bytes gs_encode(const GroupSignature& sig) {
  Bytes out = ff::g1_encode(sig.a);
  Bytes eb = ff::scalar_encode(sig.e_bar);
  out.insert(out.end(), eb.begin(), eb.end());
  return out;
}

inline GroupSignature gs_decode(std::span<const uint8_t> in) {
  if (in.size() != 64) throw Error(ErrorCode::bad_encoding, "group signature: want 64 bytes");
  return {ff::g1_decode(in.subspan(0, 32)), ff::scalar_decode(in.subspan(32, 32))};
}

}  // namespace slap::gs
