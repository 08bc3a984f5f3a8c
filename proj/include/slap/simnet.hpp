#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "slap/bytes.hpp"
#include "slap/rng.hpp"
#include "slap/sha256.hpp"

namespace slap::sim {

inline constexpr double kCLight = 299792458.0;  // m/s

inline uint64_t propagation_ns(double distance_m) {
  return uint64_t(std::llround(distance_m / kCLight * 1e9));
}

struct Vec2 {
  double x = 0, y = 0;
};

inline double distance_m(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class Channel : uint8_t { radio = 0, wired = 1, timer = 2 };

struct Endpoint {
  std::string id;
  Vec2 pos;
  double radio_range_m = 0;
  double tx_power_dbm = 20.0;
  uint64_t proc_delay_ns = 0;  // baseline local processing latency
};

struct SimEvent {
  uint64_t at_ns = 0;
  uint64_t seq = 0;
  std::string src;
  std::string dst;           // where this event is delivered
  std::string intended_dst;  // original target; differs when interposed
  Bytes payload;
  Channel channel = Channel::wired;
  uint64_t sent_ns = 0;
  double tx_power_dbm = 0;
  double rx_power_dbm = 0;  // synthesized for radio deliveries
};

struct TraceRecord {
  uint64_t t_ns;
  std::string src, dst;
  uint8_t type;  // first payload byte (message tag), 0 for empty
  size_t size;
  bool dropped;
};

struct SendOpts {
  uint64_t extra_delay_ns = 0;
  double tx_power_dbm = -1;  // <0: use endpoint default
};

/// Adversarial channel hook. `relay` diverts matching traffic to the
/// adversary endpoint (which may re-send, subject to its own position's
/// physics); `copy` delivers the original and a copy to the adversary.
struct Interpose {
  std::string src;  // empty matches any
  std::string dst;
  enum class Mode { relay, copy } mode = Mode::relay;
  std::string adversary;
};

/// Deterministic discrete-event network. A single scenario seed pins event
/// order, payload randomness, and the exported trace.
class Engine {
 public:
  using Handler = std::function<void(Engine&, const SimEvent&)>;
  // distance (m), tx power (dBm), event seq -> received power (dBm)
  using RxModel = std::function<double(double, double, uint64_t)>;

  explicit Engine(uint64_t seed) : rng_(Drbg(seed).fork("simnet")) {}

  void add_endpoint(const Endpoint& ep, Handler h) {
    endpoints_[ep.id] = ep;
    handlers_[ep.id] = std::move(h);
  }

  Endpoint& endpoint(const std::string& id) {
    auto it = endpoints_.find(id);
    if (it == endpoints_.end()) throw Error(ErrorCode::bad_argument, "simnet: unknown endpoint " + id);
    return it->second;
  }

  const Endpoint& endpoint(const std::string& id) const {
    auto it = endpoints_.find(id);
    if (it == endpoints_.end()) throw Error(ErrorCode::bad_argument, "simnet: unknown endpoint " + id);
    return it->second;
  }

  bool has_endpoint(const std::string& id) const { return endpoints_.count(id) != 0; }

  void set_rx_model(RxModel m) { rx_model_ = std::move(m); }
  void set_wired_latency_ns(uint64_t ns) { wired_latency_ns_ = ns; }
  void add_interpose(const Interpose& hook) { hooks_.push_back(hook); }

  uint64_t now_ns() const { return now_ns_; }
  Drbg& rng() { return rng_; }

  /// Schedules delivery honoring propagation physics; radio beyond the
  /// sender's range is dropped (and traced as such).
  void send(const std::string& src, const std::string& dst, Bytes payload, Channel channel,
            SendOpts opts = {}) {
    const Endpoint& s = endpoint(src);
    const Endpoint& d = endpoint(dst);
    double tx = opts.tx_power_dbm >= 0 ? opts.tx_power_dbm : s.tx_power_dbm;
    for (const auto& hook : hooks_) {
      bool match = (hook.src.empty() || hook.src == src) && (hook.dst.empty() || hook.dst == dst);
      if (!match || hook.adversary == src) continue;
      if (hook.mode == Interpose::Mode::relay) {
        deliver(src, hook.adversary, dst, std::move(payload), channel, tx, opts.extra_delay_ns);
        return;
      }
      Bytes copy = payload;
      deliver(src, hook.adversary, dst, std::move(copy), channel, tx, opts.extra_delay_ns);
    }
    if (channel == Channel::radio) {
      double dist = distance_m(s.pos, d.pos);
      if (dist > s.radio_range_m) {
        trace_.push_back({now_ns_, src, dst, payload.empty() ? uint8_t(0) : payload[0],
                          payload.size(), true});
        return;
      }
    }
    deliver(src, dst, dst, std::move(payload), channel, tx, opts.extra_delay_ns);
  }

  /// Self-delivery after `delay_ns`; used for timers and beacon rotation.
  void schedule(const std::string& entity, uint64_t delay_ns, Bytes payload) {
    SimEvent ev;
    ev.at_ns = now_ns_ + delay_ns;
    ev.seq = seq_++;
    ev.src = entity;
    ev.dst = entity;
    ev.intended_dst = entity;
    ev.payload = std::move(payload);
    ev.channel = Channel::timer;
    ev.sent_ns = now_ns_;
    queue_.push(ev);
  }

  /// Runs to quiescence (or the optional horizon). Returns delivered count.
  size_t run(uint64_t until_ns = UINT64_MAX) {
    size_t delivered = 0;
    while (!queue_.empty()) {
      SimEvent ev = queue_.top();
      if (ev.at_ns > until_ns) break;
      queue_.pop();
      now_ns_ = std::max(now_ns_, ev.at_ns);
      trace_.push_back({ev.at_ns, ev.src, ev.dst, ev.payload.empty() ? uint8_t(0) : ev.payload[0],
                        ev.payload.size(), false});
      auto it = handlers_.find(ev.dst);
      if (it != handlers_.end() && it->second) it->second(*this, ev);
      ++delivered;
    }
    return delivered;
  }

  bool idle() const { return queue_.empty(); }

  const std::vector<TraceRecord>& trace() const { return trace_; }

  std::string trace_digest() const {
    Sha256 h;
    for (const auto& r : trace_) {
      Bytes rec;
      append_u64be(rec, r.t_ns);
      append_field(rec, to_bytes(r.src));
      append_field(rec, to_bytes(r.dst));
      append_u8(rec, r.type);
      append_u64be(rec, r.size);
      append_u8(rec, r.dropped ? 1 : 0);
      h.update(std::span<const uint8_t>(rec));
    }
    return hex_encode(h.digest());
  }

  /// Newline-delimited structured trace records.
  std::string trace_export() const {
    std::string out;
    for (const auto& r : trace_) {
      out += std::to_string(r.t_ns) + " " + r.src + " " + r.dst + " type=" +
             std::to_string(int(r.type)) + " size=" + std::to_string(r.size) +
             (r.dropped ? " dropped" : "") + "\n";
    }
    return out;
  }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.at_ns != b.at_ns) return a.at_ns > b.at_ns;
      return a.seq > b.seq;
    }
  };

  void deliver(const std::string& src, const std::string& dst, const std::string& intended,
               Bytes payload, Channel channel, double tx_dbm, uint64_t extra_delay_ns) {
    const Endpoint& s = endpoint(src);
    const Endpoint& d = endpoint(dst);
    SimEvent ev;
    ev.seq = seq_++;
    ev.src = src;
    ev.dst = dst;
    ev.intended_dst = intended;
    ev.payload = std::move(payload);
    ev.channel = channel;
    ev.sent_ns = now_ns_;
    ev.tx_power_dbm = tx_dbm;
    uint64_t latency;
    if (channel == Channel::radio) {
      double dist = distance_m(s.pos, d.pos);
      latency = propagation_ns(dist) + extra_delay_ns;
      ev.rx_power_dbm = rx_model_ ? rx_model_(dist, tx_dbm, ev.seq) : tx_dbm;
    } else {
      latency = wired_latency_ns_ + extra_delay_ns;
      ev.rx_power_dbm = tx_dbm;
    }
    ev.at_ns = now_ns_ + latency;
    queue_.push(ev);
  }

  uint64_t now_ns_ = 0;
  uint64_t seq_ = 0;
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::map<std::string, Endpoint> endpoints_;
  std::map<std::string, Handler> handlers_;
  std::vector<Interpose> hooks_;
  std::vector<TraceRecord> trace_;
  RxModel rx_model_;
  uint64_t wired_latency_ns_ = 500000;  // 0.5 ms
  Drbg rng_;
};

}  // namespace slap::sim
