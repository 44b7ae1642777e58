#pragma once

#include "satpep/bytes.hpp"
#include "satpep/event_loop.hpp"
#include "satpep/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace satpep {

// Forward = side A toward side B. For the satellite link A is the gateway
// and B is the user terminal, so Forward matches the satellite forward link.
enum class Direction : std::uint8_t { Forward = 0, Return = 1 };

inline Direction opposite(Direction d) {
  return d == Direction::Forward ? Direction::Return : Direction::Forward;
}

struct DelayModel {
  enum class Kind { Constant, Trace, SinusoidLeo };
  Kind kind = Kind::Constant;
  double constant_one_way_ms = 250.0;
  // (t_seconds, one_way_ms) points, piecewise linear, repeated periodically.
  std::vector<std::pair<double, double>> trace;
  double leo_min_ms = 25.0;
  double leo_max_ms = 140.0;
  double leo_period_s = 600.0;

  static DelayModel constant(double one_way_ms);
  static DelayModel sinusoid_leo(double min_ms, double max_ms, double period_s);
  static DelayModel from_trace(std::vector<std::pair<double, double>> points);

  std::uint64_t one_way_delay_us(std::uint64_t now_us) const;
  void validate() const;
};

// Logistic SNR -> per-datagram loss probability.
struct LossModel {
  double snr_mid_db = 10.5;
  double steepness_k = 1.5;
  double floor = 0.0;
  double cap = 0.95;

  void validate() const;
};

double loss_probability(const LossModel& m, double snr_db);

struct LinkProfile {
  DelayModel delay_forward = DelayModel::constant(250.0);
  DelayModel delay_return = DelayModel::constant(250.0);
  std::uint64_t forward_rate_bps = 10'000'000;
  std::uint64_t return_rate_bps = 2'000'000;
  double clear_sky_snr_db = 20.0;
  double attenuation_forward_db = 0.0;
  double attenuation_return_db = 0.0;
  LossModel loss;
  std::uint32_t mtu_bytes = 1500;
  std::uint32_t queue_capacity = 64;  // waiting datagrams per direction
  // Link-layer encapsulation charged per datagram when serializing.
  std::uint32_t overhead_bytes = 20;
  // Optional reordering knob; 0 keeps the link strictly FIFO.
  std::uint64_t reorder_jitter_us = 0;
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

double effective_snr(const LinkProfile& p, Direction d, std::uint64_t now_us);

struct TapRecord {
  Direction direction;
  std::uint64_t send_time_us = 0;
  std::optional<std::uint64_t> deliver_time_us;  // nullopt when dropped
  Bytes payload;                                 // verbatim over-the-air copy
};

enum class DeliveryOutcome : std::uint8_t {
  Accepted,
  DroppedQueueOverflow,
  DroppedChannelLoss,
};

struct MtuExceeded : std::runtime_error {
  MtuExceeded() : std::runtime_error("datagram larger than link mtu") {}
};

struct LinkStats {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_overflow = 0;
  std::uint64_t dropped_loss = 0;
};

// Bidirectional datagram channel: per-direction serialization at the
// configured rate, bounded queue, SNR-driven random loss, propagation delay,
// and an optional verbatim capture tap. Loss replaces corruption; delivered
// datagrams are bit-identical to what was sent.
class SatLink {
 public:
  using DeliverFn = std::function<void(Bytes)>;

  SatLink(Executor& exec, LinkProfile profile, bool tap_enabled = true);

  void set_sink(Direction d, DeliverFn fn) { dir(d).sink = std::move(fn); }

  DeliveryOutcome transmit(Direction d, ByteView payload);  // throws MtuExceeded

  const LinkProfile& profile() const { return profile_; }
  LinkProfile& mutable_profile() { return profile_; }
  const std::vector<TapRecord>& tap_dump() const { return tap_; }
  const LinkStats& stats(Direction d) const { return d == Direction::Forward ? fwd_.stats : ret_.stats; }

  // Binary tap log: u8 direction, u64 BE send_time_us, u64 BE deliver_time_us
  // (all-ones when dropped), u32 BE length, payload bytes.
  void export_tap(std::ostream& os) const;

  bool tap_contains(ByteView needle) const;

 private:
  struct DirState {
    std::uint64_t busy_until_us = 0;
    std::uint32_t queued = 0;
    std::uint64_t last_delivery_us = 0;
    DeliverFn sink;
    LinkStats stats;
  };

  DirState& dir(Direction d) { return d == Direction::Forward ? fwd_ : ret_; }
  std::uint64_t rate_bps(Direction d) const {
    return d == Direction::Forward ? profile_.forward_rate_bps : profile_.return_rate_bps;
  }
  const DelayModel& delay_model(Direction d) const {
    return d == Direction::Forward ? profile_.delay_forward : profile_.delay_return;
  }

  Executor& exec_;
  LinkProfile profile_;
  RngStream loss_rng_;
  RngStream jitter_rng_;
  DirState fwd_;
  DirState ret_;
  std::vector<TapRecord> tap_;
  bool tap_enabled_;
};

}  // namespace satpep
