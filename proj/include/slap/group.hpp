#pragma once

#include <string>

#include "slap/bigmod.hpp"
#include "slap/pairing.hpp"

namespace slap::grp {

using ff::Fr;
using ff::Fp12;
using ff::G1;
using ff::G2;
using ff::G1Affine;
using ff::G2Affine;

/// Descriptor of the bilinear group triple. The concrete curve is a
/// build-time constant; all wire sizes key off encoded lengths.
struct GroupParams {
  unsigned security_bits = 100;
  size_t g1_bytes = ff::kG1Bytes;
  size_t g2_bytes = ff::kG2Bytes;
  size_t gt_bytes = ff::kGtBytes;
  size_t scalar_bytes = ff::kScalarBytes;
  G1Affine g1 = ff::g1_generator();
  G2Affine g2 = ff::g2_generator();
  std::string curve = "bn254";
};

inline GroupParams group_setup(unsigned security_bits) {
  if (security_bits != 100 && security_bits != 128)
    throw Error(ErrorCode::unsupported, "group_setup: unsupported security level");
  GroupParams p;
  p.security_bits = security_bits;
  return p;
}

/// Domain-separated hash to Z_r via 512-bit reduction.
inline Fr hash_to_scalar(std::string_view domain_tag, std::span<const uint8_t> msg) {
  return ff::hash_to_fr(domain_tag, msg);
}

inline Fr hash_to_scalar(std::string_view domain_tag, std::string_view msg) {
  return ff::hash_to_fr(
      domain_tag, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(msg.data()), msg.size()));
}

inline G1Affine g1_mul_gen(const Fr& k) {
  return G1::from_affine(ff::g1_generator()).mul(k).to_affine();
}

inline G2Affine g2_mul_gen(const Fr& k) {
  return G2::from_affine(ff::g2_generator()).mul(k).to_affine();
}

/// MSM over affine bases; small sizes, plain window per term.
inline G1Affine g1_msm(std::span<const G1Affine> bases, std::span<const Fr> scalars) {
  if (bases.size() != scalars.size())
    throw Error(ErrorCode::bad_argument, "msm: size mismatch");
  G1 acc = G1::infinity();
  for (size_t i = 0; i < bases.size(); ++i)
    acc = acc.add(G1::from_affine(bases[i]).mul(scalars[i]));
  return acc.to_affine();
}

inline G2Affine g2_msm(std::span<const G2Affine> bases, std::span<const Fr> scalars) {
  if (bases.size() != scalars.size())
    throw Error(ErrorCode::bad_argument, "msm: size mismatch");
  G2 acc = G2::infinity();
  for (size_t i = 0; i < bases.size(); ++i)
    acc = acc.add(G2::from_affine(bases[i]).mul(scalars[i]));
  return acc.to_affine();
}

}  // namespace slap::grp
