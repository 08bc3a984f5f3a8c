#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "slap/group.hpp"

namespace slap::sc {

using ff::Fr;
using ff::G1;
using ff::G2;
using ff::G1Affine;
using ff::G2Affine;

/// One certified attribute: a role tag plus a UTF-8 value. The role tag is
/// the hash domain separator, so values never collide across roles.
struct Attribute {
  std::string role;
  std::string value;

  Fr to_scalar() const {
    return grp::hash_to_scalar("slap.attr." + role, value);
  }

  friend bool operator==(const Attribute& a, const Attribute& b) {
    return a.role == b.role && a.value == b.value;
  }
};

struct AttributeSet {
  std::vector<Attribute> attrs;

  size_t size() const { return attrs.size(); }
  bool empty() const { return attrs.empty(); }

  std::vector<Fr> to_scalars() const {
    std::vector<Fr> out;
    out.reserve(attrs.size());
    for (const auto& a : attrs) out.push_back(a.to_scalar());
    for (size_t i = 0; i < out.size(); ++i)
      for (size_t j = i + 1; j < out.size(); ++j)
        if (out[i] == out[j])
          throw Error(ErrorCode::bad_argument, "attribute set: duplicate attribute");
    return out;
  }

  bool contains(const Attribute& a) const {
    return std::find(attrs.begin(), attrs.end(), a) != attrs.end();
  }

  bool subset_of(const AttributeSet& other) const {
    for (const auto& a : attrs)
      if (!other.contains(a)) return false;
    return true;
  }
};

/// Monic characteristic polynomial f_A(X) = prod (X + a_i), low-order first.
inline std::vector<Fr> char_poly(std::span<const Fr> roots) {
  std::vector<Fr> coeffs{Fr::one()};
  for (const Fr& a : roots) {
    coeffs.push_back(Fr::zero());
    for (size_t i = coeffs.size() - 1; i > 0; --i)
      coeffs[i] = coeffs[i - 1] + coeffs[i] * a;
    coeffs[0] = coeffs[0] * a;
  }
  return coeffs;
}

/// Powers-of-trapdoor basis. Index i holds g^(alpha^i), i in [0, t]; the
/// extra top power lets a full-cardinality set commit with a monic
/// polynomial of degree t.
struct SetCommitParams {
  size_t t = 0;
  std::vector<G1Affine> basis_g1;  // t+1 elements, basis_g1[0] = g
  std::vector<G2Affine> basis_g2;

  static constexpr size_t kMaxT = 64;
};

struct SetCommitment {
  G1Affine c;
};

struct Opening {
  Fr rho;
};

struct SubsetWitness {
  G1Affine w;
};

inline SetCommitParams sc_setup(size_t t, uint64_t seed) {
  if (t < 1 || t > SetCommitParams::kMaxT)
    throw Error(ErrorCode::parameter_ceiling, "sc_setup: t out of range");
  Drbg rng = Drbg(seed).fork("sc.trapdoor");
  Fr alpha = Fr::random_nonzero(rng);
  SetCommitParams p;
  p.t = t;
  p.basis_g1.reserve(t + 1);
  p.basis_g2.reserve(t + 1);
  Fr power = Fr::one();
  for (size_t i = 0; i <= t; ++i) {
    p.basis_g1.push_back(grp::g1_mul_gen(power));
    p.basis_g2.push_back(grp::g2_mul_gen(power));
    power = power * alpha;
  }
  return p;
}

/// Test-only variant retaining the trapdoor for the polynomial-evaluation
/// oracle; the default setup erases it.
inline std::pair<SetCommitParams, Fr> sc_setup_with_trapdoor(size_t t, uint64_t seed) {
  SetCommitParams p = sc_setup(t, seed);
  Drbg rng = Drbg(seed).fork("sc.trapdoor");
  return {p, Fr::random_nonzero(rng)};
}

inline G1Affine commit_poly_g1(const SetCommitParams& p, std::span<const Fr> coeffs, const Fr& scale) {
  if (coeffs.size() > p.basis_g1.size())
    throw Error(ErrorCode::parameter_ceiling, "set commitment: cardinality above t");
  std::vector<Fr> scaled(coeffs.begin(), coeffs.end());
  for (auto& c : scaled) c = c * scale;
  return grp::g1_msm(std::span<const G1Affine>(p.basis_g1.data(), scaled.size()), scaled);
}

inline G2Affine commit_poly_g2(const SetCommitParams& p, std::span<const Fr> coeffs) {
  if (coeffs.size() > p.basis_g2.size())
    throw Error(ErrorCode::parameter_ceiling, "set commitment: cardinality above t");
  return grp::g2_msm(std::span<const G2Affine>(p.basis_g2.data(), coeffs.size()),
                     std::span<const Fr>(coeffs.data(), coeffs.size()));
}

inline std::pair<SetCommitment, Opening> sc_commit(const SetCommitParams& p,
                                                   const AttributeSet& a, Drbg& rng) {
  if (a.size() > p.t) throw Error(ErrorCode::parameter_ceiling, "sc_commit: oversize set");
  auto roots = a.to_scalars();
  auto coeffs = char_poly(roots);
  Fr rho = Fr::random_nonzero(rng);
  return {SetCommitment{commit_poly_g1(p, coeffs, rho)}, Opening{rho}};
}

inline bool sc_open_full(const SetCommitParams& p, const SetCommitment& c, const AttributeSet& a,
                         const Opening& o) {
  auto coeffs = char_poly(a.to_scalars());
  return commit_poly_g1(p, coeffs, o.rho) == c.c;
}

/// Witness for D subset of A: g^{rho * f_{A \ D}(alpha)}. For D = A the
/// quotient polynomial is 1; for D = {} the witness is the commitment.
inline SubsetWitness sc_open_subset(const SetCommitParams& p, const AttributeSet& a,
                                    const AttributeSet& d, const Opening& o) {
  if (!d.subset_of(a)) throw Error(ErrorCode::subset_violation, "sc_open_subset: D not in A");
  auto a_scalars = a.to_scalars();
  auto d_scalars = d.to_scalars();
  std::vector<Fr> rest;
  for (size_t i = 0; i < a_scalars.size(); ++i) {
    bool in_d = false;
    for (const Fr& ds : d_scalars)
      if (ds == a_scalars[i]) in_d = true;
    if (!in_d) rest.push_back(a_scalars[i]);
  }
  auto coeffs = char_poly(rest);
  return SubsetWitness{commit_poly_g1(p, coeffs, o.rho)};
}

inline bool sc_verify_subset(const SetCommitParams& p, const SetCommitment& c,
                             const AttributeSet& d, const SubsetWitness& w) {
  if (d.empty()) {
    // disclosing nothing: the witness is the commitment itself
    return w.w == c.c;
  }
  if (d.size() > p.t) return false;
  if (w.w.infinity || c.c.infinity) return false;
  std::vector<Fr> d_scalars;
  try {
    d_scalars = d.to_scalars();
  } catch (const Error&) {
    return false;
  }
  G2Affine gd = commit_poly_g2(p, char_poly(d_scalars));
  // e(W, g2^{f_D(alpha)}) == e(C, g2)
  G1Affine c_neg = G1::from_affine(c.c).neg().to_affine();
  std::vector<std::pair<G1Affine, G2Affine>> pairs = {{w.w, gd}, {c_neg, ff::g2_generator()}};
  return ff::pairing_product_is_one(pairs);
}

}  // namespace slap::sc
