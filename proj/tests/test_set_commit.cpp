#include <catch2/catch_amalgamated.hpp>

#include "slap/set_commit.hpp"

using namespace slap;
using namespace slap::sc;
using slap::ff::Fr;

static AttributeSet attrs(std::initializer_list<std::pair<const char*, const char*>> init) {
  AttributeSet a;
  for (auto [role, val] : init) a.attrs.push_back({role, val});
  return a;
}

TEST_CASE("setup shape and determinism", "[set_commit]") {
  auto p = sc_setup(10, 99);
  CHECK(p.t == 10);
  CHECK(p.basis_g1.size() >= 10);
  CHECK(p.basis_g2.size() == p.basis_g1.size());
  CHECK(p.basis_g1[0] == ff::g1_generator());
  CHECK(p.basis_g2[0] == ff::g2_generator());
  // pairwise distinct basis elements
  for (size_t i = 0; i < p.basis_g1.size(); ++i)
    for (size_t j = i + 1; j < p.basis_g1.size(); ++j) CHECK_FALSE(p.basis_g1[i] == p.basis_g1[j]);
  auto p2 = sc_setup(10, 99);
  CHECK(p2.basis_g1[5] == p.basis_g1[5]);
  auto p3 = sc_setup(10, 100);
  CHECK_FALSE(p3.basis_g1[5] == p.basis_g1[5]);
  CHECK_THROWS_AS(sc_setup(0, 1), Error);
  CHECK_THROWS_AS(sc_setup(SetCommitParams::kMaxT + 1, 1), Error);
}

TEST_CASE("commit binds to the characteristic polynomial at the trapdoor", "[set_commit]") {
  auto [p, alpha] = sc_setup_with_trapdoor(8, 7);
  auto a = attrs({{"device-id", "dev-1"}, {"device-type", "iot"}, {"location", "cell-9"}});
  Drbg rng(1);
  auto [c, o] = sc_commit(p, a, rng);
  // oracle: evaluate the monic polynomial prod(alpha + a_i) directly
  Fr eval = Fr::one();
  for (const Fr& root : a.to_scalars()) eval = eval * (alpha + root);
  CHECK(c.c == grp::g1_mul_gen(eval * o.rho));
}

TEST_CASE("commit/open basics", "[set_commit]") {
  auto p = sc_setup(8, 7);
  auto a = attrs({{"device-id", "dev-1"}, {"device-type", "iot"}});
  Drbg rng(2);
  auto [c, o] = sc_commit(p, a, rng);
  CHECK(sc_open_full(p, c, a, o));
  auto [c2, o2] = sc_commit(p, a, rng);
  CHECK_FALSE(c.c == c2.c);  // hiding randomness
  // oversize set refused
  AttributeSet big;
  for (int i = 0; i < 9; ++i) big.attrs.push_back({"device-id", "x" + std::to_string(i)});
  CHECK_THROWS_AS(sc_commit(p, big, rng), Error);
}

TEST_CASE("subset open and verify", "[set_commit]") {
  auto p = sc_setup(8, 7);
  auto a = attrs({{"device-id", "d"}, {"device-type", "iot"}, {"location", "c3"}});
  Drbg rng(3);
  auto [c, o] = sc_commit(p, a, rng);

  SECTION("full disclosure") {
    auto w = sc_open_subset(p, a, a, o);
    CHECK(sc_verify_subset(p, c, a, w));
  }
  SECTION("proper subset") {
    auto d = attrs({{"device-type", "iot"}});
    auto w = sc_open_subset(p, a, d, o);
    CHECK(sc_verify_subset(p, c, d, w));
    // witness does not verify for a different disclosed set
    auto d2 = attrs({{"device-id", "d"}});
    CHECK_FALSE(sc_verify_subset(p, c, d2, w));
  }
  SECTION("empty disclosure is the commitment itself") {
    AttributeSet empty;
    auto w = sc_open_subset(p, a, empty, o);
    CHECK(w.w == c.c);
    CHECK(sc_verify_subset(p, c, empty, w));
  }
  SECTION("foreign attribute refused") {
    auto d = attrs({{"device-type", "laptop"}});
    CHECK_THROWS_AS(sc_open_subset(p, a, d, o), Error);
  }
  SECTION("mutated witness rejected") {
    auto d = attrs({{"device-type", "iot"}});
    auto w = sc_open_subset(p, a, d, o);
    w.w = ff::G1::from_affine(w.w).dbl().to_affine();
    CHECK_FALSE(sc_verify_subset(p, c, d, w));
  }
  SECTION("witness against commitment of disjoint set rejected") {
    auto d = attrs({{"device-type", "iot"}});
    auto w = sc_open_subset(p, a, d, o);
    auto other = attrs({{"device-id", "zz"}, {"location", "c4"}});
    auto [c_other, o_other] = sc_commit(p, other, rng);
    CHECK_FALSE(sc_verify_subset(p, c_other, d, w));
  }
}

TEST_CASE("correctness property over random sets", "[set_commit]") {
  auto p = sc_setup(8, 11);
  Drbg rng(4);
  for (int rep = 0; rep < 12; ++rep) {
    AttributeSet a;
    size_t n = 1 + rng.uniform(p.t);
    for (size_t i = 0; i < n; ++i)
      a.attrs.push_back({"device-id", "attr" + std::to_string(rng.uniform(1000)) + "_" + std::to_string(i)});
    auto [c, o] = sc_commit(p, a, rng);
    AttributeSet d;
    for (const auto& at : a.attrs)
      if (rng.coin()) d.attrs.push_back(at);
    auto w = sc_open_subset(p, a, d, o);
    CHECK(sc_verify_subset(p, c, d, w));
  }
}

TEST_CASE("subset soundness exhaustive for small sets", "[set_commit]") {
  auto p = sc_setup(6, 13);
  Drbg rng(5);
  std::vector<Attribute> pool = {{"device-id", "a"},
                                 {"device-id", "b"},
                                 {"device-type", "iot"},
                                 {"location", "c1"}};
  std::vector<Attribute> foreign = {{"device-id", "zzz"}, {"location", "c9"}};
  for (unsigned mask = 1; mask < 16; ++mask) {
    AttributeSet a;
    for (int i = 0; i < 4; ++i)
      if (mask & (1u << i)) a.attrs.push_back(pool[i]);
    auto [c, o] = sc_commit(p, a, rng);
    // every D from the pool + foreign attrs: open errors when D has a
    // foreign element; honest witnesses never verify for any other D'
    for (unsigned dmask = 0; dmask < 64; ++dmask) {
      AttributeSet d;
      for (int i = 0; i < 4; ++i)
        if (dmask & (1u << i)) d.attrs.push_back(pool[i]);
      for (int i = 0; i < 2; ++i)
        if (dmask & (1u << (4 + i))) d.attrs.push_back(foreign[i]);
      if (!d.subset_of(a)) {
        CHECK_THROWS_AS(sc_open_subset(p, a, d, o), Error);
      }
    }
    // witness for one subset never verifies as a different subset
    AttributeSet d_first;
    d_first.attrs.push_back(a.attrs[0]);
    auto w = sc_open_subset(p, a, d_first, o);
    for (unsigned dmask = 1; dmask < 16; ++dmask) {
      AttributeSet d2;
      for (int i = 0; i < 4; ++i)
        if (dmask & (1u << i)) d2.attrs.push_back(pool[i]);
      bool same = d2.subset_of(d_first) && d_first.subset_of(d2);
      if (!same && !d2.empty()) CHECK_FALSE(sc_verify_subset(p, c, d2, w));
    }
  }
}

TEST_CASE("binding smoke test under random search", "[set_commit]") {
  auto p = sc_setup(4, 17);
  Drbg rng(6);
  auto a = attrs({{"device-id", "target"}});
  auto [c, o] = sc_commit(p, a, rng);
  for (int i = 0; i < 100; ++i) {
    AttributeSet other;
    other.attrs.push_back({"device-id", "forge" + std::to_string(i)});
    Opening forged{Fr::random(rng)};
    CHECK_FALSE(sc_open_full(p, c, other, forged));
  }
}

TEST_CASE("duplicate attributes rejected", "[set_commit]") {
  auto a = attrs({{"device-id", "x"}, {"device-id", "x"}});
  CHECK_THROWS_AS(a.to_scalars(), Error);
}
