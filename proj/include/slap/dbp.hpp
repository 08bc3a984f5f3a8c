#pragma once

#include <memory>
#include <string>
#include <vector>

#include "slap/curve.hpp"
#include "slap/simnet.hpp"

namespace slap::dbp {

using ff::Fr;
using ff::G1;
using ff::G1Affine;

/// 2n-bit string with the paper's 1-indexed response addressing:
/// round i, challenge c -> a_{2i+c-1}.
struct BitString {
  std::vector<bool> bits;

  size_t size() const { return bits.size(); }

  bool response_bit(size_t round_1based, bool challenge) const {
    size_t idx = 2 * round_1based + (challenge ? 1 : 0) - 2;  // 0-based
    if (idx >= bits.size()) throw Error(ErrorCode::out_of_range, "dbp: round index out of pad");
    return bits[idx];
  }

  static BitString from_bytes(std::span<const uint8_t> b, size_t nbits) {
    BitString s;
    s.bits.reserve(nbits);
    for (size_t i = 0; i < nbits; ++i) s.bits.push_back((b[i / 8] >> (7 - i % 8)) & 1);
    return s;
  }

  Bytes to_bytes() const {
    Bytes out((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) out[i / 8] |= uint8_t(1u << (7 - i % 8));
    return out;
  }

  static BitString random(Drbg& rng, size_t nbits) {
    return from_bytes(rng.bytes((nbits + 7) / 8), nbits);
  }

  BitString xored(const BitString& o) const {
    if (bits.size() != o.bits.size()) throw Error(ErrorCode::bad_argument, "dbp: xor length mismatch");
    BitString r;
    r.bits.reserve(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) r.bits.push_back(bits[i] != o.bits[i]);
    return r;
  }
};

/// One-pass nonce Diffie-Hellman key agreement; both roles derive the same
/// 2n-bit session key from their secret and the peer's public key.
inline BitString aka_derive(const Fr& own_sk, const G1Affine& peer_pk,
                            std::span<const uint8_t> nonce, size_t n_rounds) {
  if (peer_pk.infinity) throw Error(ErrorCode::bad_argument, "aka_derive: identity peer key");
  G1Affine shared = G1::from_affine(peer_pk).mul(own_sk).to_affine();
  Bytes secret = ff::g1_encode(shared);
  size_t nbits = 2 * n_rounds;
  Bytes stream;
  for (uint32_t ctr = 0; stream.size() * 8 < nbits; ++ctr) {
    Bytes block;
    append_u32be(block, ctr);
    auto h = Sha256()
                 .update("slap.dbp.aka")
                 .update(std::span<const uint8_t>(secret))
                 .update(nonce)
                 .update(std::span<const uint8_t>(block))
                 .digest();
    stream.insert(stream.end(), h.begin(), h.end());
  }
  return BitString::from_bytes(stream, nbits);
}

struct DbpConfig {
  size_t n_rounds = 16;
  double th_m = 100.0;
  uint64_t allowance_ns = 10;      // prover processing slack in the bound
  uint64_t prover_proc_ns = 5;     // honest prover per-round latency
};

inline uint64_t round_trip_bound_ns(const DbpConfig& cfg) {
  return 2 * sim::propagation_ns(cfg.th_m) + cfg.allowance_ns;
}

struct RoundRecord {
  bool challenge;
  bool response;
  uint64_t timer_ns;
  bool time_ok;
  bool resp_ok;
};

struct DbpTranscript {
  std::vector<RoundRecord> rounds;
  bool verdict = false;
  std::string reason;  // set when verdict is 0

  /// Newline-delimited audit export: round, challenge, response, timer, pass.
  std::string export_records() const {
    std::string out;
    for (size_t i = 0; i < rounds.size(); ++i) {
      const auto& r = rounds[i];
      out += std::to_string(i + 1) + " c=" + std::to_string(int(r.challenge)) +
             " r=" + std::to_string(int(r.response)) + " timer_ns=" + std::to_string(r.timer_ns) +
             " pass=" + std::to_string(int(r.time_ok && r.resp_ok)) + "\n";
    }
    out += "verdict=" + std::to_string(int(verdict)) + (reason.empty() ? "" : " reason=" + reason) +
           "\n";
    return out;
  }
};

/// Responder model for the arithmetic fast-phase harness. `respond` sees the
/// challenge; the timing fields model where the answer physically comes from.
class Responder {
 public:
  virtual ~Responder() = default;
  virtual bool respond(size_t round_1based, bool challenge) = 0;
  virtual double distance_m() const = 0;
  virtual uint64_t processing_ns() const = 0;
};

class HonestProver : public Responder {
 public:
  HonestProver(BitString table, double dist_m, uint64_t proc_ns)
      : a_(std::move(table)), dist_(dist_m), proc_(proc_ns) {}
  bool respond(size_t i, bool c) override { return a_.response_bit(i, c); }
  double distance_m() const override { return dist_; }
  uint64_t processing_ns() const override { return proc_; }

 private:
  BitString a_;
  double dist_;
  uint64_t proc_;
};

enum class AdversaryKind { guess, pre_ask, distance_fraud, distance_hijack };

inline AdversaryKind adversary_kind_from_string(const std::string& s) {
  if (s == "guess") return AdversaryKind::guess;
  if (s == "pre_ask") return AdversaryKind::pre_ask;
  if (s == "distance_fraud") return AdversaryKind::distance_fraud;
  if (s == "distance_hijack") return AdversaryKind::distance_hijack;
  throw Error(ErrorCode::unsupported, "dbp: unknown adversary kind " + s);
}

struct AdversaryParams {
  double distance_m = 10.0;          // where the responder answers from
  uint64_t processing_ns = 0;        // adversaries answer instantly
  const BitString* honest_table = nullptr;  // pre_ask / distance_fraud need it
  const BitString* own_table = nullptr;     // distance_hijack's unrelated session
  uint64_t seed = 0;
};

/// Deterministic-under-seed adversarial responders for the fraud harness.
inline std::unique_ptr<Responder> adversary_strategy(AdversaryKind kind,
                                                     const AdversaryParams& params) {
  struct Guess : Responder {
    Drbg rng;
    double d;
    explicit Guess(const AdversaryParams& p) : rng(Drbg(p.seed).fork("dbp.guess")), d(p.distance_m) {}
    bool respond(size_t, bool) override { return rng.coin(); }
    double distance_m() const override { return d; }
    uint64_t processing_ns() const override { return 0; }
  };
  struct PreAsk : Responder {
    // queried the far prover in advance with a guessed challenge per round;
    // on a wrong guess only a coin flip is left
    Drbg rng;
    double d;
    std::vector<bool> guessed_c, learned_r;
    PreAsk(const AdversaryParams& p) : rng(Drbg(p.seed).fork("dbp.preask")), d(p.distance_m) {
      if (!p.honest_table) throw Error(ErrorCode::bad_argument, "pre_ask: needs prover table");
      size_t n = p.honest_table->size() / 2;
      for (size_t i = 1; i <= n; ++i) {
        bool g = rng.coin();
        guessed_c.push_back(g);
        learned_r.push_back(p.honest_table->response_bit(i, g));
      }
    }
    bool respond(size_t i, bool c) override {
      if (c == guessed_c[i - 1]) return learned_r[i - 1];
      return rng.coin();
    }
    double distance_m() const override { return d; }
    uint64_t processing_ns() const override { return 0; }
  };
  struct DistanceFraud : Responder {
    // legitimate key holder answering from beyond the threshold
    const BitString* a;
    double d;
    explicit DistanceFraud(const AdversaryParams& p) : a(p.honest_table), d(p.distance_m) {
      if (!a) throw Error(ErrorCode::bad_argument, "distance_fraud: needs own table");
    }
    bool respond(size_t i, bool c) override { return a->response_bit(i, c); }
    double distance_m() const override { return d; }
    uint64_t processing_ns() const override { return 0; }
  };
  struct Hijack : Responder {
    // steals a session: answers near the verifier but with the pad of an
    // unrelated session key
    const BitString* a;
    double d;
    explicit Hijack(const AdversaryParams& p) : a(p.own_table), d(p.distance_m) {
      if (!a) throw Error(ErrorCode::bad_argument, "distance_hijack: needs a table");
    }
    bool respond(size_t i, bool c) override { return a->response_bit(i, c); }
    double distance_m() const override { return d; }
    uint64_t processing_ns() const override { return 0; }
  };
  switch (kind) {
    case AdversaryKind::guess: return std::make_unique<Guess>(params);
    case AdversaryKind::pre_ask: return std::make_unique<PreAsk>(params);
    case AdversaryKind::distance_fraud: return std::make_unique<DistanceFraud>(params);
    case AdversaryKind::distance_hijack: return std::make_unique<Hijack>(params);
  }
  throw Error(ErrorCode::unsupported, "dbp: unknown adversary kind");
}

/// Arithmetic fast-phase harness: same physics as the simnet path without
/// the event queue, for high-trial fraud statistics.
inline DbpTranscript run_fast_phase(const BitString& verifier_table, Responder& prover,
                                    const DbpConfig& cfg, Drbg& rng) {
  DbpTranscript t;
  uint64_t bound = round_trip_bound_ns(cfg);
  bool all_ok = true;
  for (size_t i = 1; i <= cfg.n_rounds; ++i) {
    bool c = rng.coin();
    bool r = prover.respond(i, c);
    uint64_t timer = 2 * sim::propagation_ns(prover.distance_m()) + prover.processing_ns();
    bool time_ok = timer <= bound;
    bool resp_ok = r == verifier_table.response_bit(i, c);
    t.rounds.push_back({c, r, timer, time_ok, resp_ok});
    all_ok = all_ok && time_ok && resp_ok;
  }
  t.verdict = all_ok;
  if (!all_ok) t.reason = "round check failed";
  return t;
}

}  // namespace slap::dbp
