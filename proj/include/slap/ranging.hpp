#pragma once

#include <cmath>

#include "slap/bytes.hpp"
#include "slap/simnet.hpp"

namespace slap::ranging {

/// Log-distance path-loss environment plus the AP-side timing constants.
struct EnvParams {
  double gamma = 2.0;            // path-loss exponent
  double d0_m = 1.0;             // reference distance
  double pl_d0_dbm = 40.0;       // path loss at d0
  double ptx_dbm = 20.0;         // transmit power
  double shadow_sigma_db = 0.0;  // log-normal shadowing
  uint64_t t_proc_ns = 500;      // per-leg processing delay
  double eps_cross_m = 50.0;     // RSS/RTT cross-check tolerance

  void validate() const {
    if (gamma < 1.6 || gamma > 6.0) throw Error(ErrorCode::bad_argument, "env: gamma out of [1.6, 6]");
    if (d0_m <= 0) throw Error(ErrorCode::bad_argument, "env: d0 must be positive");
    if (eps_cross_m <= 0) throw Error(ErrorCode::bad_argument, "env: eps_cross must be positive");
  }
};

inline double path_loss_db(const EnvParams& env, double distance_m) {
  double d = std::max(distance_m, env.d0_m);
  return env.pl_d0_dbm + 10.0 * env.gamma * std::log10(d / env.d0_m);
}

/// Synthesized received power for a transmission over `distance_m`.
inline double rss_dbm(const EnvParams& env, double distance_m, double shadow_db = 0.0) {
  return env.ptx_dbm - path_loss_db(env, distance_m) - shadow_db;
}

inline double rtt_ns_model(const EnvParams& env, double distance_m) {
  return 2.0 * double(sim::propagation_ns(distance_m)) + 2.0 * double(env.t_proc_ns);
}

/// RSS- and RTT-derived distance estimates; when the two disagree beyond
/// eps_cross the exchange looks relayed and the proof is refused upstream.
struct ProxEstimate {
  double d_rtt_m;
  double d_rss_m;
  double delta_m;  // accepted estimate
};

inline ProxEstimate prox_verify(double rss_dbm_measured, double rtt_ns, const EnvParams& env) {
  env.validate();
  if (rtt_ns < 2.0 * double(env.t_proc_ns))
    throw Error(ErrorCode::bad_argument, "prox_verify: RTT below processing floor");
  double d_rtt = (rtt_ns - 2.0 * double(env.t_proc_ns)) * 1e-9 * sim::kCLight / 2.0;
  double d_rss =
      env.d0_m * std::pow(10.0, (env.ptx_dbm - env.pl_d0_dbm - rss_dbm_measured) / (10.0 * env.gamma));
  if (std::abs(d_rtt - d_rss) > env.eps_cross_m)
    throw Error(ErrorCode::ranging_inconsistent, "prox_verify: RSS/RTT mismatch, possible relay");
  return {d_rtt, d_rss, d_rtt};
}

/// Closed-disc coverage decision around the AP.
inline bool in_coverage(double delta_m, sim::Vec2 claimed, sim::Vec2 ap_position, double margin_m) {
  return sim::distance_m(claimed, ap_position) <= delta_m + margin_m;
}

}  // namespace slap::ranging
