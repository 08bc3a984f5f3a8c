#pragma once

#include <map>
#include <optional>
#include <vector>

#include "slap/set_commit.hpp"

namespace slap::dac {

using ff::Fr;
using ff::G1;
using ff::G2;
using ff::G1Affine;
using ff::G2Affine;
using sc::AttributeSet;

// Credential signatures sign a vector of set commitments (one per
// delegation level) and bind the holder's pseudonym:
//   Z = (prod_i C_i^{x_i})^{1/y},  Y = g^y,  Yhat = g2^y,
//   T = Y^{by} * nym^{bn}
// Verification:
//   e(Z, Yhat) = prod_i e(C_i, Xhat_i)
//   e(Y, g2)   = e(g, Yhat)
//   e(T, g2)   = e(Y, Bhat_y) * e(nym, Bhat_n)
// The class representative randomizes by (mu, psi); update keys
// uk_j = (g^{alpha^i})^{x_j / y} extend the vector to level j; the T factor
// swaps between holders through its orphaned form T * Bn^{-s}.

struct DacParams {
  grp::GroupParams group;
  sc::SetCommitParams sc_params;
  size_t eta = 2;  // maximum delegation depth
};

struct RootPublicKey {
  std::vector<G2Affine> level_pk;  // Xhat_i, one per level i in [eta]
  G2Affine bhat_y;
  G2Affine bhat_n;
  G1Affine bn;  // g^{bn}, lets holders adapt / orphan the T component

  Bytes encode() const {
    Bytes out;
    append_u32be(out, uint32_t(level_pk.size()));
    for (const auto& pk : level_pk) append(out, ff::g2_encode(pk));
    append(out, ff::g2_encode(bhat_y));
    append(out, ff::g2_encode(bhat_n));
    append(out, ff::g1_encode(bn));
    return out;
  }
};

struct RootKeys {
  std::vector<Fr> level_sk;  // x_i per level
  Fr by, bn_sk;
  RootPublicKey pk;
};

struct UserKeys {
  Fr sk;
  G1Affine pk;
};

struct Pseudonym {
  G1Affine nym;
  Fr aux;  // nym = pk^aux; the holder's nym secret is sk * aux
};

struct Sig {
  G1Affine z, y, t;
  G2Affine yhat;
};

struct CredLevel {
  G1Affine c;
  Fr rho;
  AttributeSet attrs;
};

struct Credential {
  Sig sig;
  std::vector<CredLevel> levels;
  std::map<size_t, std::vector<G1Affine>> dk;  // update keys by level index (1-based)
  size_t dk_bound = 0;                         // 0 encodes "no further delegation"
  G1Affine nym;
  Fr aux;         // current pseudonym randomizer
  Fr nym_secret;  // dlog of nym, held by the owner only

  size_t depth() const { return levels.size(); }

  /// Fixed-size core: Z || Y || Yhat || T || nym || aux.
  Bytes encode_core() const {
    Bytes out;
    append(out, ff::g1_encode(sig.z));
    append(out, ff::g1_encode(sig.y));
    append(out, ff::g2_encode(sig.yhat));
    append(out, ff::g1_encode(sig.t));
    append(out, ff::g1_encode(nym));
    append(out, ff::scalar_encode(aux));
    return out;
  }
};

struct PresLevel {
  G1Affine c;
  AttributeSet disclosed;
  std::optional<G1Affine> witness;  // absent when nothing is disclosed
};

struct SchnorrProof {
  G1Affine r;
  Fr z;
};

struct Presentation {
  G1Affine nym;
  Sig sig;
  std::vector<PresLevel> levels;
  SchnorrProof pok;

  Bytes encode() const {
    Bytes out;
    append(out, ff::g1_encode(nym));
    append(out, ff::g1_encode(sig.z));
    append(out, ff::g1_encode(sig.y));
    append(out, ff::g2_encode(sig.yhat));
    append(out, ff::g1_encode(sig.t));
    append_u8(out, uint8_t(levels.size()));
    for (const auto& lv : levels) {
      append(out, ff::g1_encode(lv.c));
      append_u8(out, uint8_t(lv.disclosed.size()));
      for (const auto& a : lv.disclosed.attrs) {
        append_field(out, to_bytes(a.role));
        append_field(out, to_bytes(a.value));
      }
      append_u8(out, lv.witness ? 1 : 0);
      if (lv.witness) append(out, ff::g1_encode(*lv.witness));
    }
    append(out, ff::g1_encode(pok.r));
    append(out, ff::scalar_encode(pok.z));
    return out;
  }

  static Presentation decode(ByteReader& r) {
    Presentation p;
    p.nym = ff::g1_decode(r.fixed(32));
    p.sig.z = ff::g1_decode(r.fixed(32));
    p.sig.y = ff::g1_decode(r.fixed(32));
    p.sig.yhat = ff::g2_decode(r.fixed(64));
    p.sig.t = ff::g1_decode(r.fixed(32));
    size_t k = r.u8();
    for (size_t i = 0; i < k; ++i) {
      PresLevel lv;
      lv.c = ff::g1_decode(r.fixed(32));
      size_t nd = r.u8();
      for (size_t j = 0; j < nd; ++j) {
        Bytes role = r.field();
        Bytes val = r.field();
        lv.disclosed.attrs.push_back(
            {std::string(role.begin(), role.end()), std::string(val.begin(), val.end())});
      }
      if (r.u8()) lv.witness = ff::g1_decode(r.fixed(32));
      p.levels.push_back(std::move(lv));
    }
    p.pok.r = ff::g1_decode(r.fixed(32));
    p.pok.z = ff::scalar_decode(r.fixed(32));
    return p;
  }
};

inline std::pair<DacParams, RootKeys> dac_setup(unsigned security_bits, size_t t, size_t eta,
                                                uint64_t seed) {
  if (eta < 2) throw Error(ErrorCode::bad_argument, "dac_setup: eta must be > 1");
  if (eta > 16) throw Error(ErrorCode::parameter_ceiling, "dac_setup: eta ceiling is 16");
  DacParams params;
  params.group = grp::group_setup(security_bits);
  params.sc_params = sc::sc_setup(t, seed);
  params.eta = eta;
  Drbg rng = Drbg(seed).fork("dac.rootkeys");
  RootKeys keys;
  for (size_t i = 0; i < eta; ++i) {
    Fr x = Fr::random_nonzero(rng);
    keys.level_sk.push_back(x);
    keys.pk.level_pk.push_back(grp::g2_mul_gen(x));
  }
  keys.by = Fr::random_nonzero(rng);
  keys.bn_sk = Fr::random_nonzero(rng);
  keys.pk.bhat_y = grp::g2_mul_gen(keys.by);
  keys.pk.bhat_n = grp::g2_mul_gen(keys.bn_sk);
  keys.pk.bn = grp::g1_mul_gen(keys.bn_sk);
  return {params, keys};
}

inline UserKeys dac_keygen(const DacParams&, Drbg& rng) {
  UserKeys k;
  k.sk = Fr::random_nonzero(rng);
  k.pk = grp::g1_mul_gen(k.sk);
  return k;
}

inline Pseudonym nym_gen(const DacParams&, const UserKeys& user, Drbg& rng) {
  Fr aux = Fr::random_nonzero(rng);
  return {G1::from_affine(user.pk).mul(aux).to_affine(), aux};
}

/// Test-mode helper; aux = 0 means the identity rerandomization (nym = pk).
inline Pseudonym nym_from_aux(const UserKeys& user, const Fr& aux) {
  if (aux.is_zero()) return {user.pk, Fr::one()};
  return {G1::from_affine(user.pk).mul(aux).to_affine(), aux};
}

inline Fr nym_secret(const UserKeys& user, const Pseudonym& nym) { return user.sk * nym.aux; }

// ---- Schnorr proof of knowledge of the nym secret, Fiat-Shamir over an
// explicit context ----

inline Fr pok_challenge(const G1Affine& nym, const G1Affine& r, std::span<const uint8_t> context) {
  Bytes buf;
  append(buf, ff::g1_encode(nym));
  append(buf, ff::g1_encode(r));
  append_field(buf, context);
  return grp::hash_to_scalar("slap.dac.pok", buf);
}

inline SchnorrProof pok_prove(const Fr& secret, const G1Affine& nym,
                              std::span<const uint8_t> context, Drbg& rng) {
  Fr r = Fr::random_nonzero(rng);
  G1Affine big_r = grp::g1_mul_gen(r);
  Fr c = pok_challenge(nym, big_r, context);
  return {big_r, r + c * secret};
}

inline bool pok_verify(const G1Affine& nym, const SchnorrProof& proof,
                       std::span<const uint8_t> context) {
  if (nym.infinity || proof.r.infinity) return false;
  Fr c = pok_challenge(nym, proof.r, context);
  G1Affine lhs = grp::g1_mul_gen(proof.z);
  G1Affine rhs = G1::from_affine(proof.r).add(G1::from_affine(nym).mul(c)).to_affine();
  return lhs == rhs;
}

namespace detail {

inline Sig sign_vector(const RootKeys& rk, std::span<const CredLevel> levels, const G1Affine& nym,
                       const Fr& y) {
  G1 acc = G1::infinity();
  for (size_t i = 0; i < levels.size(); ++i)
    acc = acc.add(G1::from_affine(levels[i].c).mul(rk.level_sk[i]));
  Fr y_inv = y.inverse();
  Sig s;
  s.z = acc.mul(y_inv).to_affine();
  s.y = grp::g1_mul_gen(y);
  s.yhat = grp::g2_mul_gen(y);
  // T = Y^{by} * nym^{bn}
  s.t = G1::from_affine(s.y).mul(rk.by).add(G1::from_affine(nym).mul(rk.bn_sk)).to_affine();
  return s;
}

inline std::vector<G1Affine> make_update_key(const DacParams& params, const RootKeys& rk,
                                             size_t level_1based, const Fr& y_inv) {
  std::vector<G1Affine> uk;
  uk.reserve(params.sc_params.basis_g1.size());
  Fr scale = rk.level_sk[level_1based - 1] * y_inv;
  for (const auto& base : params.sc_params.basis_g1)
    uk.push_back(G1::from_affine(base).mul(scale).to_affine());
  return uk;
}

}  // namespace detail

/// Root issuance (the non-interactive core of CreateCred/GetCred). The
/// interactive nonce and proof-of-knowledge exchange lives in the protocol
/// layer; the caller passes the already-validated holder pseudonym.
inline Credential root_issue(const DacParams& params, const RootKeys& rk, const AttributeSet& a,
                             size_t l_prime, const G1Affine& nym_u, Drbg& rng) {
  if (l_prime > params.eta)
    throw Error(ErrorCode::delegation_bound, "root_issue: L' exceeds eta");
  if (a.size() > params.sc_params.t)
    throw Error(ErrorCode::parameter_ceiling, "root_issue: oversize attribute set");
  auto [c1, o1] = sc::sc_commit(params.sc_params, a, rng);
  Credential cred;
  cred.levels.push_back({c1.c, o1.rho, a});
  Fr y = Fr::random_nonzero(rng);
  cred.sig = detail::sign_vector(rk, cred.levels, nym_u, y);
  Fr y_inv = y.inverse();
  for (size_t j = 2; j <= l_prime; ++j)
    cred.dk[j] = detail::make_update_key(params, rk, j, y_inv);
  cred.dk_bound = l_prime >= 2 ? l_prime : 0;
  cred.nym = nym_u;
  return cred;
}

/// Raw signature check against the root key; holders run it on receipt,
/// verifiers use cred_verify on presentations instead.
inline bool verify_signature(const DacParams& params, const RootPublicKey& pk, const Sig& sig,
                             std::span<const G1Affine> commitments, const G1Affine& nym) {
  if (sig.z.infinity || sig.y.infinity || sig.t.infinity || nym.infinity) return false;
  if (commitments.size() > pk.level_pk.size()) return false;
  const G2Affine g2 = ff::g2_generator();
  // e(Z, Yhat) * prod e(C_i, Xhat_i)^-1 == 1
  std::vector<std::pair<G1Affine, G2Affine>> eq1;
  eq1.push_back({sig.z, sig.yhat});
  for (size_t i = 0; i < commitments.size(); ++i)
    eq1.push_back({G1::from_affine(commitments[i]).neg().to_affine(), pk.level_pk[i]});
  if (!ff::pairing_product_is_one(eq1)) return false;
  // e(Y, g2) == e(g, Yhat)
  std::vector<std::pair<G1Affine, G2Affine>> eq2 = {
      {sig.y, g2}, {G1::from_affine(ff::g1_generator()).neg().to_affine(), sig.yhat}};
  if (!ff::pairing_product_is_one(eq2)) return false;
  // e(T, g2) == e(Y, Bhat_y) * e(nym, Bhat_n)
  std::vector<std::pair<G1Affine, G2Affine>> eq3 = {
      {sig.t, g2},
      {G1::from_affine(sig.y).neg().to_affine(), pk.bhat_y},
      {G1::from_affine(nym).neg().to_affine(), pk.bhat_n}};
  return ff::pairing_product_is_one(eq3);
}

/// Holder-side consistency check after issuance or delegation.
inline bool holder_check(const DacParams& params, const RootPublicKey& pk, const Credential& cred) {
  std::vector<G1Affine> cs;
  for (const auto& lv : cred.levels) {
    cs.push_back(lv.c);
    if (!sc::sc_open_full(params.sc_params, {lv.c}, lv.attrs, {lv.rho})) return false;
  }
  return verify_signature(params, pk, cred.sig, cs, cred.nym);
}

namespace detail {

struct Randomizers {
  Fr mu, psi;
};

/// Randomizes the class representative in place; nym binding unchanged.
inline void randomize_sig(const RootPublicKey& pk, Credential& cred, const Randomizers& r) {
  Fr psi_inv = r.psi.inverse();
  // orphan form U = T * Bn^{-s} = Y^{by}, rebuilt after scaling Y
  G1 u = G1::from_affine(cred.sig.t)
             .add(G1::from_affine(pk.bn).mul(cred.nym_secret).neg());
  cred.sig.z = G1::from_affine(cred.sig.z).mul(r.mu * psi_inv).to_affine();
  cred.sig.y = G1::from_affine(cred.sig.y).mul(r.psi).to_affine();
  cred.sig.yhat = G2::from_affine(cred.sig.yhat).mul(r.psi).to_affine();
  cred.sig.t = u.mul(r.psi).add(G1::from_affine(pk.bn).mul(cred.nym_secret)).to_affine();
  for (auto& lv : cred.levels) {
    lv.c = G1::from_affine(lv.c).mul(r.mu).to_affine();
    lv.rho = lv.rho * r.mu;
  }
}

}  // namespace detail

/// Re-randomizes the stored credential, optionally rotating to a fresh
/// pseudonym; update keys scale along with the signature randomizer.
inline void change_rep(const DacParams&, const RootPublicKey& pk, Credential& cred, Drbg& rng,
                       bool rotate_nym) {
  detail::Randomizers r{Fr::random_nonzero(rng), Fr::random_nonzero(rng)};
  if (rotate_nym) {
    Fr tau = Fr::random_nonzero(rng);
    // move T to the new nym first: T' = T * Bn^{s'-s}
    Fr s_old = cred.nym_secret;
    Fr s_new = s_old * tau;
    cred.sig.t = G1::from_affine(cred.sig.t)
                     .add(G1::from_affine(pk.bn).mul(s_new - s_old))
                     .to_affine();
    cred.nym = G1::from_affine(cred.nym).mul(tau).to_affine();
    cred.aux = cred.aux * tau;
    cred.nym_secret = s_new;
  }
  detail::randomize_sig(pk, cred, r);
  Fr psi_inv = r.psi.inverse();
  for (auto& [level, uk] : cred.dk)
    for (auto& e : uk) e = G1::from_affine(e).mul(psi_inv).to_affine();
}

struct DelegationPackage {
  Sig sig;  // T in orphaned form
  std::vector<CredLevel> levels;
  std::map<size_t, std::vector<G1Affine>> dk;
  size_t dk_bound = 0;
};

/// Delegator side of IssueCred: extends the commitment vector with the new
/// attribute level, hands over openings and surviving update keys, and
/// orphans the holder binding. l_new_bound = 0 encodes dk' = no-delegation.
inline DelegationPackage delegate_extend(const DacParams& params, const RootPublicKey& pk,
                                         const Credential& cred, const AttributeSet& a_l,
                                         size_t l_new_bound, Drbg& rng) {
  size_t next_level = cred.depth() + 1;
  if (next_level > params.eta)
    throw Error(ErrorCode::depth_exceeded, "delegate: chain is at maximum depth");
  if (cred.dk_bound < next_level)
    throw Error(ErrorCode::delegation_bound, "delegate: update key does not reach this level");
  if (l_new_bound != 0 && (l_new_bound > cred.dk_bound || l_new_bound < next_level))
    throw Error(ErrorCode::delegation_bound, "delegate: requested bound exceeds delegator's");
  auto uk_it = cred.dk.find(next_level);
  if (uk_it == cred.dk.end())
    throw Error(ErrorCode::delegation_bound, "delegate: missing update key");

  auto coeffs = sc::char_poly(a_l.to_scalars());
  if (coeffs.size() > uk_it->second.size())
    throw Error(ErrorCode::parameter_ceiling, "delegate: oversize attribute set");
  Fr rho = Fr::random_nonzero(rng);

  DelegationPackage pkg;
  pkg.levels = cred.levels;
  // C_{k+1} from the public basis; Z gains C^{x_{k+1}/y} via the update key
  G1Affine c_new = sc::commit_poly_g1(params.sc_params, coeffs, rho);
  G1 z_gain = G1::infinity();
  for (size_t i = 0; i < coeffs.size(); ++i)
    z_gain = z_gain.add(G1::from_affine(uk_it->second[i]).mul(coeffs[i] * rho));
  pkg.levels.push_back({c_new, rho, a_l});
  pkg.sig = cred.sig;
  pkg.sig.z = G1::from_affine(cred.sig.z).add(z_gain).to_affine();
  // orphan: U = T * Bn^{-s}
  pkg.sig.t = G1::from_affine(cred.sig.t)
                  .add(G1::from_affine(pk.bn).mul(cred.nym_secret).neg())
                  .to_affine();
  pkg.dk_bound = l_new_bound;
  for (size_t j = next_level + 1; j <= l_new_bound; ++j) {
    auto it = cred.dk.find(j);
    if (it == cred.dk.end())
      throw Error(ErrorCode::delegation_bound, "delegate: missing update key for requested bound");
    pkg.dk[j] = it->second;
  }
  return pkg;
}

/// Delegatee side of ReceiveCred: binds the orphaned signature to the new
/// holder and unlinks it from the issuance transcript.
inline Credential delegatee_receive(const DacParams& params, const RootPublicKey& pk,
                                    const UserKeys& user, const DelegationPackage& pkg,
                                    Drbg& rng) {
  Credential cred;
  cred.sig = pkg.sig;
  cred.levels = pkg.levels;
  cred.dk = pkg.dk;
  cred.dk_bound = pkg.dk_bound;
  Pseudonym nym = nym_gen(DacParams{}, user, rng);
  cred.nym = nym.nym;
  cred.aux = nym.aux;
  cred.nym_secret = nym_secret(user, nym);
  // adopt the orphan: T = U * Bn^{s}
  cred.sig.t = G1::from_affine(cred.sig.t)
                   .add(G1::from_affine(pk.bn).mul(cred.nym_secret))
                   .to_affine();
  change_rep(params, pk, user, cred, rng, false);
  return cred;
}

// ---- presentation ----

inline Fr presentation_challenge(const RootPublicKey& pk, const Presentation& pres,
                                 std::span<const uint8_t> context) {
  Bytes buf = pk.encode();
  // everything but pok.z binds the transcript
  append(buf, ff::g1_encode(pres.nym));
  append(buf, ff::g1_encode(pres.sig.z));
  append(buf, ff::g1_encode(pres.sig.y));
  append(buf, ff::g2_encode(pres.sig.yhat));
  append(buf, ff::g1_encode(pres.sig.t));
  for (const auto& lv : pres.levels) {
    append(buf, ff::g1_encode(lv.c));
    for (const auto& a : lv.disclosed.attrs) {
      append_field(buf, to_bytes(a.role));
      append_field(buf, to_bytes(a.value));
    }
    if (lv.witness) append(buf, ff::g1_encode(*lv.witness));
  }
  append(buf, ff::g1_encode(pres.pok.r));
  append_field(buf, context);
  return grp::hash_to_scalar("slap.dac.present", buf);
}

/// CredProve: fresh randomizers every call; presenting under the supplied
/// pseudonym (which may deliberately repeat across a session).
inline Presentation cred_prove(const DacParams& params, const RootPublicKey& pk,
                               const UserKeys& user, const Pseudonym& nym,
                               const Credential& cred,
                               std::span<const AttributeSet> disclose,
                               std::span<const uint8_t> context, Drbg& rng) {
  if (disclose.size() > cred.depth())
    throw Error(ErrorCode::bad_argument, "cred_prove: more disclosure sets than levels");
  Credential work = cred;
  // rebind to the requested pseudonym: T' = T * Bn^{s_new - s_old}
  Fr s_new = nym_secret(user, nym);
  work.sig.t = G1::from_affine(work.sig.t)
                   .add(G1::from_affine(pk.bn).mul(s_new - work.nym_secret))
                   .to_affine();
  work.nym = nym.nym;
  work.aux = nym.aux;
  work.nym_secret = s_new;
  detail::Randomizers r{Fr::random_nonzero(rng), Fr::random_nonzero(rng)};
  detail::randomize_sig(pk, work, r);

  Presentation pres;
  pres.nym = work.nym;
  pres.sig = work.sig;
  for (size_t i = 0; i < work.levels.size(); ++i) {
    PresLevel lv;
    lv.c = work.levels[i].c;
    if (i < disclose.size() && !disclose[i].empty()) {
      lv.disclosed = disclose[i];
      auto w = sc::sc_open_subset(params.sc_params, work.levels[i].attrs, disclose[i],
                                  {work.levels[i].rho});
      lv.witness = w.w;
    }
    pres.levels.push_back(std::move(lv));
  }
  Fr rr = Fr::random_nonzero(rng);
  pres.pok.r = grp::g1_mul_gen(rr);
  Fr c = presentation_challenge(pk, pres, context);
  pres.pok.z = rr + c * s_new;
  return pres;
}

/// CredVerify: signature chain to the root key, subset witnesses for the
/// disclosed sets, and the holder's proof of knowledge, all bound to the
/// verifier-supplied context.
inline bool cred_verify(const DacParams& params, const RootPublicKey& pk,
                        const Presentation& pres, std::span<const uint8_t> context) {
  if (pres.levels.empty() || pres.levels.size() > params.eta) return false;
  for (const auto& lv : pres.levels)
    if (lv.c.infinity) return false;
  // proof of knowledge of the nym secret
  Fr c = presentation_challenge(pk, pres, context);
  if (pres.nym.infinity || pres.pok.r.infinity) return false;
  G1Affine lhs = grp::g1_mul_gen(pres.pok.z);
  G1Affine rhs = G1::from_affine(pres.pok.r).add(G1::from_affine(pres.nym).mul(c)).to_affine();
  if (lhs != rhs) return false;
  // signature equations
  std::vector<G1Affine> cs;
  for (const auto& lv : pres.levels) cs.push_back(lv.c);
  if (!verify_signature(params, pk, pres.sig, cs, pres.nym)) return false;
  // subset witnesses
  for (const auto& lv : pres.levels) {
    if (lv.disclosed.empty()) continue;
    if (!lv.witness) return false;
    if (!sc::sc_verify_subset(params.sc_params, {lv.c}, lv.disclosed, {*lv.witness})) return false;
  }
  return true;
}

/// Convenience wrapper used by tests and the protocol driver: NymGen plus
/// root issuance plus holder finalization.
inline Credential create_cred(const DacParams& params, const RootKeys& rk, const UserKeys& user,
                              const AttributeSet& a, size_t l_prime, Drbg& rng) {
  Pseudonym nym = nym_gen(params, user, rng);
  Credential cred = root_issue(params, rk, a, l_prime, nym.nym, rng);
  cred.aux = nym.aux;
  cred.nym_secret = nym_secret(user, nym);
  if (!holder_check(params, rk.pk, cred))
    throw Error(ErrorCode::internal, "create_cred: issued credential fails holder check");
  return cred;
}

}  // namespace slap::dac
