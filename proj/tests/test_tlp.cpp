#include <catch2/catch_amalgamated.hpp>

#include "slap/tlp.hpp"

using namespace slap;
using namespace slap::tlp;

// toy parameters: p'=11, q'=23, d=27, kappa=5
static PuzzleKeys toy_keys() {
  BigModulus mod = BigModulus::from_primes(Mpz(11), Mpz(23));
  PuzzleKeys keys;
  keys.phi = *mod.phi;
  Mpz d(27);
  Mpz e = *Mpz::invert(d, keys.phi);
  Mpz r = Mpz::powm_u64(Mpz(2), 5, keys.phi);
  keys.pub = Puzzle{mod.n, 5, keys.phi - r + e};
  keys.sec = PuzzleSecret{mod.n, d};
  keys.e = e;
  return keys;
}

TEST_CASE("toy vector: derivation of e, r, z, etilde", "[tlp]") {
  auto keys = toy_keys();
  CHECK(keys.pub.n.to_u64() == 253);
  CHECK(keys.phi.to_u64() == 220);
  CHECK(keys.e.to_u64() == 163);
  CHECK(Mpz::powm_u64(Mpz(2), 5, keys.phi).to_u64() == 32);
  CHECK(keys.pub.z.to_u64() == 351);
  CHECK(puzzle_etilde(keys.pub).to_u64() == 383);
}

TEST_CASE("toy vector: solving m=2 yields c=52 and verifies", "[tlp]") {
  auto keys = toy_keys();
  SolveStats stats;
  auto sol = puzzle_solve(Mpz(2), keys.pub, &stats);
  CHECK(sol.c.to_u64() == 52);
  CHECK(stats.squarings == 5);
  CHECK(solution_verify(keys.sec, sol));
  // oracle: naive modular exponentiation c^d mod n
  CHECK(Mpz::powm(sol.c, keys.sec.d, keys.pub.n).to_u64() == 2);
  // algebraic identity: c = m^e mod n
  CHECK(Mpz::powm(Mpz(2), keys.e, keys.pub.n) == sol.c);
}

TEST_CASE("identity and boundary cases", "[tlp]") {
  auto keys = toy_keys();
  auto sol = puzzle_solve(Mpz(1), keys.pub);
  CHECK(sol.c.to_u64() == 1);
  CHECK(solution_verify(keys.sec, sol));
  CHECK_THROWS_AS(puzzle_solve(Mpz(0), keys.pub), Error);
  CHECK_THROWS_AS(puzzle_solve(Mpz(253), keys.pub), Error);
  // perturbed solution rejected
  auto bad = puzzle_solve(Mpz(2), keys.pub);
  bad.c = (bad.c + Mpz(1)) % keys.pub.n;
  CHECK_FALSE(solution_verify(keys.sec, bad));
}

TEST_CASE("kappa=1 minimal puzzle still verifies", "[tlp]") {
  Drbg rng(31);
  BigModulus mod = rsa_modulus_gen(64, rng);
  auto keys = puzzle_gen_from_modulus(mod, 1, rng);
  SolveStats stats;
  auto sol = puzzle_solve(Mpz(7) % keys.pub.n, keys.pub, &stats);
  CHECK(stats.squarings == 1);
  CHECK(solution_verify(keys.sec, sol));
}

TEST_CASE("generated puzzles never share a modulus", "[tlp]") {
  Drbg rng(32);
  ModulusRegistry reg;
  auto a = puzzle_gen(128, 50, rng, &reg);
  auto b = puzzle_gen(128, 50, rng, &reg);
  CHECK(a.pub.n != b.pub.n);
  CHECK(reg.size() == 2);
  // re-publishing an exponent for a used modulus is a hard error
  BigModulus mod = rsa_modulus_gen(128, rng);
  auto c = puzzle_gen_from_modulus(mod, 10, rng, &reg);
  CHECK_THROWS_AS(puzzle_gen_from_modulus(mod, 20, rng, &reg), Error);
}

TEST_CASE("correctness property over random messages", "[tlp]") {
  Drbg rng(33);
  BigModulus mod = rsa_modulus_gen(256, rng);
  auto keys = puzzle_gen_from_modulus(mod, 64, rng);
  for (int i = 0; i < 10; ++i) {
    Mpz m = Mpz::from_bytes_be(rng.bytes(31)) % keys.pub.n;
    if (m.sign() <= 0) continue;
    SolveStats stats;
    auto sol = puzzle_solve(m, keys.pub, &stats);
    CHECK(stats.squarings == keys.pub.kappa);
    CHECK(solution_verify(keys.sec, sol));
    // z-term cancellation: c = m^e mod n
    CHECK(Mpz::powm(m, keys.e, keys.pub.n) == sol.c);
  }
}

TEST_CASE("2048-bit profile roundtrip", "[tlp]") {
  Drbg rng(34);
  BigModulus mod = rsa_modulus_gen(2048, rng);
  auto keys = puzzle_gen_from_modulus(mod, 3000, rng, nullptr, true);
  Mpz m = Mpz::from_bytes_be(rng.bytes(64));
  auto sol = puzzle_solve(m, keys.pub);
  CHECK(solution_verify(keys.sec, sol));
  // disjointness profile: kappa at or below |phi| bits refused
  CHECK_THROWS_AS(puzzle_gen_from_modulus(rsa_modulus_gen(2048, rng), 2048, rng, nullptr, true),
                  Error);
}

TEST_CASE("difficulty policy", "[tlp]") {
  auto policy = DifficultyPolicy::defaults();
  CHECK(difficulty_for("iot", ThreatLevel::low, policy) == 10000);  // 0.1s * 1e5/s
  CHECK(difficulty_for("iot", ThreatLevel::none, policy) == policy.floor_kappa);
  // monotone in threat level
  for (const char* cls : {"iot", "phone", "laptop", "unknown-widget"}) {
    uint64_t prev = 0;
    for (auto t : {ThreatLevel::none, ThreatLevel::low, ThreatLevel::medium, ThreatLevel::high}) {
      uint64_t k = difficulty_for(cls, t, policy);
      CHECK(k >= prev);
      CHECK(k >= 1);
      prev = k;
    }
  }
  // unknown class is treated conservatively: at least the fastest class rate
  CHECK(difficulty_for("unknown-widget", ThreatLevel::low, policy) >=
        difficulty_for("laptop", ThreatLevel::low, policy));
}

TEST_CASE("puzzle wire encoding roundtrip", "[tlp]") {
  Drbg rng(35);
  auto keys = puzzle_gen(128, 40, rng);
  Bytes enc = puzzle_encode(keys.pub);
  ByteReader r(enc);
  Puzzle back = puzzle_decode(r);
  CHECK(back.n == keys.pub.n);
  CHECK(back.kappa == keys.pub.kappa);
  CHECK(back.z == keys.pub.z);
  auto sol = puzzle_solve(Mpz(5), keys.pub);
  Bytes senc = solution_encode(sol);
  ByteReader r2(senc);
  auto back_sol = solution_decode(r2);
  CHECK(back_sol.m == sol.m);
  CHECK(back_sol.c == sol.c);
}
