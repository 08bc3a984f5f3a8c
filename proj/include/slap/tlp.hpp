#pragma once

#include <chrono>
#include <map>
#include <set>
#include <string>

#include "slap/bigmod.hpp"

namespace slap::tlp {

/// Public puzzle in compact form: etilde = 2^kappa + z is never
/// materialized; the solver runs kappa sequential squarings plus one
/// standard exponentiation by z.
struct Puzzle {
  Mpz n;
  uint64_t kappa = 0;
  Mpz z;
};

struct PuzzleSecret {
  Mpz n;
  Mpz d;
};

struct PuzzleKeys {
  Puzzle pub;
  PuzzleSecret sec;
  Mpz e;    // d^{-1} mod phi, generator-side
  Mpz phi;  // retained by generator only
  double rate_sq_per_s = 0;  // reference rate S
  double target_s = 0;       // desired delay T
};

struct PuzzleSolution {
  Mpz m;
  Mpz c;
};

struct SolveStats {
  uint64_t squarings = 0;
  double seconds = 0;
};

/// Enforces the one-etilde-per-modulus rule: publishing two exponents for
/// one n lets a solver recover phi(n).
class ModulusRegistry {
 public:
  void register_modulus(const Mpz& n) {
    Bytes enc = n.to_bytes_be();
    if (!seen_.insert(enc).second)
      throw Error(ErrorCode::modulus_reuse, "tlp: modulus already has a published exponent");
  }
  size_t size() const { return seen_.size(); }

 private:
  std::set<Bytes> seen_;
};

inline PuzzleKeys puzzle_gen_from_modulus(const BigModulus& mod, uint64_t kappa, Drbg& rng,
                                          ModulusRegistry* registry = nullptr,
                                          bool require_disjoint = false) {
  if (kappa < 1) throw Error(ErrorCode::bad_argument, "puzzle_gen: kappa must be >= 1");
  if (!mod.phi) throw Error(ErrorCode::bad_argument, "puzzle_gen: modulus without factorization");
  const Mpz& phi = *mod.phi;
  if (require_disjoint && kappa <= phi.bit_length())
    throw Error(ErrorCode::bad_argument, "puzzle_gen: kappa must exceed |phi| bits in this profile");
  if (registry) registry->register_modulus(mod.n);
  // private exponent first, public e derived from it
  Mpz d, e;
  for (;;) {
    size_t nb = (phi.bit_length() + 7) / 8;
    d = Mpz::from_bytes_be(rng.bytes(nb)) % phi;
    if (d <= Mpz(2)) continue;
    auto inv = Mpz::invert(d, phi);
    if (!inv) continue;
    e = *inv;
    break;
  }
  Mpz r = Mpz::powm_u64(Mpz(2), kappa, phi);
  Mpz z = phi - r + e;
  PuzzleKeys keys;
  keys.pub = Puzzle{mod.n, kappa, z};
  keys.sec = PuzzleSecret{mod.n, d};
  keys.e = e;
  keys.phi = phi;
  return keys;
}

inline PuzzleKeys puzzle_gen(unsigned security_bits, uint64_t kappa, Drbg& rng,
                             ModulusRegistry* registry = nullptr,
                             bool require_disjoint = false) {
  BigModulus mod = rsa_modulus_gen(security_bits, rng);
  return puzzle_gen_from_modulus(mod, kappa, rng, registry, require_disjoint);
}

/// Full public exponent 2^kappa + z; only sensible for toy kappa.
inline Mpz puzzle_etilde(const Puzzle& p) { return Mpz::pow2(p.kappa) + p.z; }

inline PuzzleSolution puzzle_solve(const Mpz& m, const Puzzle& p, SolveStats* stats = nullptr) {
  if (m.sign() <= 0 || !(m < p.n))
    throw Error(ErrorCode::out_of_range, "puzzle_solve: need 0 < m < n");
  auto t0 = std::chrono::steady_clock::now();
  Mpz c1 = m;
  uint64_t count = 0;
  for (uint64_t i = 0; i < p.kappa; ++i) {
    c1 = c1.sqr_mod(p.n);
    ++count;
  }
  Mpz c2 = Mpz::powm(m, p.z, p.n);
  Mpz c = (c1 * c2) % p.n;
  if (stats) {
    stats->squarings = count;
    stats->seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return PuzzleSolution{m, c};
}

inline bool solution_verify(const PuzzleSecret& sec, const PuzzleSolution& sol) {
  if (sol.m.sign() <= 0 || !(sol.m < sec.n)) return false;
  return Mpz::powm(sol.c, sec.d, sec.n) == sol.m;
}

enum class ThreatLevel { none = 0, low = 1, medium = 2, high = 3 };

inline const char* threat_name(ThreatLevel t) {
  switch (t) {
    case ThreatLevel::none: return "none";
    case ThreatLevel::low: return "low";
    case ThreatLevel::medium: return "medium";
    case ThreatLevel::high: return "high";
  }
  return "?";
}

/// kappa = T * S per device class rate and threat-level target delay.
struct DifficultyPolicy {
  uint64_t floor_kappa = 1;
  std::map<std::string, double> class_rate_sq_per_s;  // reference solver rate per class
  std::map<ThreatLevel, double> target_delay_s;

  static DifficultyPolicy defaults() {
    DifficultyPolicy p;
    p.floor_kappa = 1;
    p.class_rate_sq_per_s = {{"iot", 1e5}, {"phone", 5e5}, {"laptop", 2e6}};
    p.target_delay_s = {{ThreatLevel::none, 0.0},
                        {ThreatLevel::low, 0.1},
                        {ThreatLevel::medium, 0.5},
                        {ThreatLevel::high, 2.0}};
    return p;
  }
};

inline uint64_t difficulty_for(const std::string& device_class, ThreatLevel threat,
                               const DifficultyPolicy& policy) {
  double target = 0;
  if (auto it = policy.target_delay_s.find(threat); it != policy.target_delay_s.end())
    target = it->second;
  double rate;
  if (auto it = policy.class_rate_sq_per_s.find(device_class);
      it != policy.class_rate_sq_per_s.end()) {
    rate = it->second;
  } else {
    // unknown class: assume the fastest configured device
    rate = 0;
    for (const auto& [cls, r] : policy.class_rate_sq_per_s) rate = std::max(rate, r);
    if (rate == 0) rate = 1e6;
  }
  uint64_t kappa = uint64_t(target * rate + 0.5);
  return std::max(policy.floor_kappa, kappa);
}

/// Measured squarings-per-second for modulus of the given size.
inline double calibrate_rate(unsigned bits, uint64_t probe_squarings, Drbg& rng) {
  BigModulus mod = rsa_modulus_gen(bits, rng);
  Mpz m = Mpz::from_bytes_be(rng.bytes(bits / 8)) % mod.n;
  if (m.sign() <= 0) m = Mpz(2);
  auto t0 = std::chrono::steady_clock::now();
  Mpz acc = m;
  for (uint64_t i = 0; i < probe_squarings; ++i) acc = acc.sqr_mod(mod.n);
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return dt > 0 ? double(probe_squarings) / dt : 0;
}

// wire format: n || kappa (8B BE) || z, length-prefixed big integers
inline Bytes puzzle_encode(const Puzzle& p) {
  Bytes out;
  append_field(out, p.n.to_bytes_be());
  append_u64be(out, p.kappa);
  append_field(out, p.z.to_bytes_be());
  return out;
}

inline Puzzle puzzle_decode(ByteReader& r) {
  Puzzle p;
  p.n = Mpz::from_bytes_be(r.field());
  p.kappa = r.u64be();
  p.z = Mpz::from_bytes_be(r.field());
  return p;
}

inline Bytes solution_encode(const PuzzleSolution& s) {
  Bytes out;
  append_field(out, s.m.to_bytes_be());
  append_field(out, s.c.to_bytes_be());
  return out;
}

inline PuzzleSolution solution_decode(ByteReader& r) {
  PuzzleSolution s;
  s.m = Mpz::from_bytes_be(r.field());
  s.c = Mpz::from_bytes_be(r.field());
  return s;
}

}  // namespace slap::tlp
