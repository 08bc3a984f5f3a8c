#include <catch2/catch_amalgamated.hpp>

#include "slap/gsig.hpp"

using namespace slap;
using namespace slap::gs;
using slap::ff::Fr;

static std::vector<Fr> random_msg(Drbg& rng, size_t n) {
  std::vector<Fr> m;
  for (size_t i = 0; i < n; ++i) m.push_back(Fr::random(rng));
  return m;
}

TEST_CASE("setup shape", "[gsig]") {
  auto p = gs_setup(6, 5);
  CHECK(p.h1.size() == 6);
  for (const auto& h : p.h1) CHECK(ff::on_curve_g1(h));
  auto p2 = gs_setup(6, 6);
  CHECK_FALSE(p2.h1[0] == p.h1[0]);
  CHECK_THROWS_AS(gs_setup(0, 1), Error);
}

TEST_CASE("keygen invariant GK = g2^x", "[gsig]") {
  auto p = gs_setup(6, 5);
  Drbg rng(1);
  auto k1 = gs_keygen(p, rng);
  CHECK(k1.gk == grp::g2_mul_gen(k1.sk));
  CHECK_FALSE(k1.sk.is_zero());
  auto k2 = gs_keygen(p, rng);
  CHECK_FALSE(k1.sk == k2.sk);
}

TEST_CASE("sign/verify roundtrip and A^{x+e} = C", "[gsig]") {
  auto p = gs_setup(6, 5);
  Drbg rng(2);
  auto keys = gs_keygen(p, rng);
  auto m = random_msg(rng, 6);
  auto sig = gs_sign(p, keys, m, rng);
  CHECK(gs_verify(p, keys.gk, m, sig) == true);
  // recompute with the retained secret
  Fr exp = keys.sk + sig.e_bar;
  CHECK(ff::G1::from_affine(sig.a).mul(exp).to_affine() == message_commitment(p, m));
  // fresh randomness on re-sign
  auto sig2 = gs_sign(p, keys, m, rng);
  CHECK_FALSE(sig.e_bar == sig2.e_bar);
}

TEST_CASE("verification rejects tampering", "[gsig]") {
  auto p = gs_setup(6, 5);
  Drbg rng(3);
  auto keys = gs_keygen(p, rng);
  auto m = random_msg(rng, 6);
  auto sig = gs_sign(p, keys, m, rng);
  for (size_t i = 0; i < m.size(); ++i) {
    auto m2 = m;
    m2[i] = m2[i] + Fr::one();
    CHECK_FALSE(gs_verify(p, keys.gk, m2, sig));
  }
  auto other = gs_keygen(p, rng);
  CHECK_FALSE(gs_verify(p, other.gk, m, sig));
  auto broken = sig;
  broken.e_bar = broken.e_bar + Fr::one();
  CHECK_FALSE(gs_verify(p, keys.gk, m, broken));
}

TEST_CASE("signature encoding is 64 bytes", "[gsig]") {
  auto p = gs_setup(6, 5);
  Drbg rng(4);
  auto keys = gs_keygen(p, rng);
  auto m = random_msg(rng, 6);
  auto sig = gs_sign(p, keys, m, rng);
  Bytes enc = gs_encode(sig);
  CHECK(enc.size() == 64);
  auto dec = gs_decode(enc);
  CHECK(dec.a == sig.a);
  CHECK(dec.e_bar == sig.e_bar);
}

TEST_CASE("batch verify accepts honest batches and locates corruption", "[gsig]") {
  auto p = gs_setup(6, 5);
  Drbg rng(5);
  auto keys = gs_keygen(p, rng);
  std::vector<std::pair<std::vector<Fr>, GroupSignature>> items;
  for (int i = 0; i < 5; ++i) {
    auto m = random_msg(rng, 6);
    items.push_back({m, gs_sign(p, keys, m, rng)});
  }
  auto res = gs_batch_verify(p, keys.gk, items, rng);
  CHECK(res.ok);
  // single-item batch behaves like gs_verify
  std::vector<std::pair<std::vector<Fr>, GroupSignature>> one = {items[0]};
  CHECK(gs_batch_verify(p, keys.gk, one, rng).ok);
  // corrupt one item
  auto corrupted = items;
  corrupted[3].first[0] = corrupted[3].first[0] + Fr::one();
  auto bad = gs_batch_verify(p, keys.gk, corrupted, rng);
  CHECK_FALSE(bad.ok);
  CHECK(bad.first_failure == 3);
  CHECK_THROWS_AS(
      gs_batch_verify(p, keys.gk,
                      std::span<const std::pair<std::vector<Fr>, GroupSignature>>{}, rng),
      Error);
}

TEST_CASE("batch/single equivalence over corruption patterns", "[gsig]") {
  auto p = gs_setup(3, 5);
  Drbg rng(6);
  auto keys = gs_keygen(p, rng);
  // batches up to 8 items, every corruption pattern; expensive loop kept
  // to small messages
  for (size_t size : {2u, 4u, 8u}) {
    std::vector<std::pair<std::vector<Fr>, GroupSignature>> honest;
    for (size_t i = 0; i < size; ++i) {
      auto m = random_msg(rng, 3);
      honest.push_back({m, gs_sign(p, keys, m, rng)});
    }
    for (unsigned pattern = 0; pattern < (1u << size); ++pattern) {
      auto items = honest;
      for (size_t i = 0; i < size; ++i)
        if (pattern & (1u << i)) items[i].first[1] = items[i].first[1] + Fr::one();
      auto res = gs_batch_verify(p, keys.gk, items, rng);
      bool expect_ok = pattern == 0;
      CHECK(res.ok == expect_ok);
      if (!expect_ok) {
        long expect_first = 0;
        while (!(pattern & (1u << expect_first))) ++expect_first;
        CHECK(res.first_failure == expect_first);
      }
    }
  }
}
