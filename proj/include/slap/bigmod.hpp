#pragma once

#include <gmp.h>

#include <optional>
#include <utility>

#include "slap/bytes.hpp"
#include "slap/rng.hpp"

namespace slap {

/// RAII wrapper over a GMP integer with just the operations the TLP and
/// RSA plumbing need.
class Mpz {
 public:
  Mpz() { mpz_init(z_); }
  explicit Mpz(uint64_t v) { mpz_init_set_ui(z_, v); }
  Mpz(const Mpz& o) { mpz_init_set(z_, o.z_); }
  Mpz(Mpz&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  Mpz& operator=(const Mpz& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  Mpz& operator=(Mpz&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~Mpz() { mpz_clear(z_); }

  static Mpz from_hex(const std::string& s) {
    Mpz r;
    if (mpz_set_str(r.z_, s.c_str(), 16) != 0)
      throw Error(ErrorCode::bad_encoding, "Mpz: bad hex");
    return r;
  }

  static Mpz from_bytes_be(std::span<const uint8_t> b) {
    Mpz r;
    if (!b.empty()) mpz_import(r.z_, b.size(), 1, 1, 1, 0, b.data());
    return r;
  }

  Bytes to_bytes_be() const {
    size_t count = (mpz_sizeinbase(z_, 2) + 7) / 8;
    if (mpz_sgn(z_) == 0) return Bytes{0};
    Bytes out(count);
    size_t written = 0;
    mpz_export(out.data(), &written, 1, 1, 1, 0, z_);
    out.resize(written);
    return out;
  }

  /// Big-endian, left-padded to exactly n bytes; value must fit.
  Bytes to_bytes_be_padded(size_t n) const {
    Bytes raw = to_bytes_be();
    if (raw.size() == 1 && raw[0] == 0) raw.clear();
    if (raw.size() > n) throw Error(ErrorCode::out_of_range, "Mpz: value too large for pad");
    Bytes out(n - raw.size(), 0);
    out.insert(out.end(), raw.begin(), raw.end());
    return out;
  }

  std::string to_dec() const {
    char* s = mpz_get_str(nullptr, 10, z_);
    std::string out(s);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, out.size() + 1);
    return out;
  }

  uint64_t to_u64() const { return mpz_get_ui(z_); }
  size_t bit_length() const { return mpz_sgn(z_) == 0 ? 0 : mpz_sizeinbase(z_, 2); }
  bool is_odd() const { return mpz_odd_p(z_); }
  int sign() const { return mpz_sgn(z_); }

  friend Mpz operator+(const Mpz& a, const Mpz& b) {
    Mpz r;
    mpz_add(r.z_, a.z_, b.z_);
    return r;
  }
  friend Mpz operator-(const Mpz& a, const Mpz& b) {
    Mpz r;
    mpz_sub(r.z_, a.z_, b.z_);
    return r;
  }
  friend Mpz operator*(const Mpz& a, const Mpz& b) {
    Mpz r;
    mpz_mul(r.z_, a.z_, b.z_);
    return r;
  }
  friend Mpz operator%(const Mpz& a, const Mpz& b) {
    Mpz r;
    mpz_mod(r.z_, a.z_, b.z_);
    return r;
  }
  friend bool operator==(const Mpz& a, const Mpz& b) { return mpz_cmp(a.z_, b.z_) == 0; }
  friend bool operator!=(const Mpz& a, const Mpz& b) { return !(a == b); }
  friend bool operator<(const Mpz& a, const Mpz& b) { return mpz_cmp(a.z_, b.z_) < 0; }
  friend bool operator>(const Mpz& a, const Mpz& b) { return mpz_cmp(a.z_, b.z_) > 0; }
  friend bool operator<=(const Mpz& a, const Mpz& b) { return mpz_cmp(a.z_, b.z_) <= 0; }

  static Mpz powm(const Mpz& base, const Mpz& exp, const Mpz& mod) {
    Mpz r;
    mpz_powm(r.z_, base.z_, exp.z_, mod.z_);
    return r;
  }

  static Mpz powm_u64(const Mpz& base, uint64_t exp, const Mpz& mod) {
    Mpz r;
    mpz_powm_ui(r.z_, base.z_, exp, mod.z_);
    return r;
  }

  static Mpz pow2(uint64_t k) {
    Mpz r(1);
    mpz_mul_2exp(r.z_, r.z_, k);
    return r;
  }

  static std::optional<Mpz> invert(const Mpz& a, const Mpz& mod) {
    Mpz r;
    if (mpz_invert(r.z_, a.z_, mod.z_) == 0) return std::nullopt;
    return r;
  }

  static Mpz gcd(const Mpz& a, const Mpz& b) {
    Mpz r;
    mpz_gcd(r.z_, a.z_, b.z_);
    return r;
  }

  static Mpz next_prime(const Mpz& a) {
    Mpz r;
    mpz_nextprime(r.z_, a.z_);
    return r;
  }

  bool probably_prime() const { return mpz_probab_prime_p(z_, 30) > 0; }

  Mpz sqr_mod(const Mpz& mod) const {
    Mpz r;
    mpz_mul(r.z_, z_, z_);
    mpz_mod(r.z_, r.z_, mod.z_);
    return r;
  }

 private:
  mpz_t z_;
};

/// RSA-style modulus; factorization and phi are retained by the generator
/// and never serialized with the public material.
struct BigModulus {
  Mpz n;
  std::optional<Mpz> p, q;
  std::optional<Mpz> phi;

  static BigModulus from_primes(const Mpz& p, const Mpz& q) {
    BigModulus m;
    m.n = p * q;
    m.p = p;
    m.q = q;
    m.phi = (p - Mpz(1)) * (q - Mpz(1));
    return m;
  }
};

/// Generates n = p*q with two distinct random primes of bits/2.
inline BigModulus rsa_modulus_gen(unsigned bits, Drbg& rng) {
  if (bits < 8) throw Error(ErrorCode::bad_argument, "rsa_modulus_gen: bits too small");
  unsigned half = bits / 2;
  // candidates get the top two bits set so n lands on exactly `bits` bits
  Mpz top = Mpz::pow2(half - 1) + Mpz::pow2(half - 2);
  auto gen_prime = [&] {
    Bytes cb = rng.bytes((half + 7) / 8);
    Mpz base = (Mpz::from_bytes_be(cb) % Mpz::pow2(half - 2)) + top;
    return Mpz::next_prime(base);
  };
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mpz p = gen_prime();
    Mpz q = gen_prime();
    if (p == q) continue;
    Mpz n = p * q;
    if (n.bit_length() != bits) continue;
    return BigModulus::from_primes(p, q);
  }
  throw Error(ErrorCode::internal, "rsa_modulus_gen: retries exhausted");
}

}  // namespace slap
