#include "satpep/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace satpep {

DelayModel DelayModel::constant(double one_way_ms) {
  DelayModel m;
  m.kind = Kind::Constant;
  m.constant_one_way_ms = one_way_ms;
  return m;
}

DelayModel DelayModel::sinusoid_leo(double min_ms, double max_ms, double period_s) {
  DelayModel m;
  m.kind = Kind::SinusoidLeo;
  m.leo_min_ms = min_ms;
  m.leo_max_ms = max_ms;
  m.leo_period_s = period_s;
  return m;
}

DelayModel DelayModel::from_trace(std::vector<std::pair<double, double>> points) {
  DelayModel m;
  m.kind = Kind::Trace;
  m.trace = std::move(points);
  return m;
}

void DelayModel::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  switch (kind) {
    case Kind::Constant:
      require(constant_one_way_ms >= 0.0, "delay must be >= 0");
      break;
    case Kind::SinusoidLeo:
      require(leo_min_ms >= 0.0 && leo_max_ms >= leo_min_ms, "leo delay range invalid");
      require(leo_period_s > 0.0, "leo period must be > 0");
      break;
    case Kind::Trace: {
      require(!trace.empty(), "delay trace empty");
      double prev_t = -1.0;
      for (const auto& [t, ms] : trace) {
        require(t > prev_t, "trace times must be strictly increasing");
        require(ms >= 0.0, "trace delay must be >= 0");
        prev_t = t;
      }
      break;
    }
  }
}

std::uint64_t DelayModel::one_way_delay_us(std::uint64_t now_us) const {
  double ms = 0.0;
  switch (kind) {
    case Kind::Constant:
      ms = constant_one_way_ms;
      break;
    case Kind::SinusoidLeo: {
      double t = static_cast<double>(now_us) / 1e6;
      double phase = 2.0 * M_PI * std::fmod(t, leo_period_s) / leo_period_s;
      ms = leo_min_ms + (leo_max_ms - leo_min_ms) * 0.5 * (1.0 + std::sin(phase));
      break;
    }
    case Kind::Trace: {
      double period = trace.back().first;
      double t = period > 0.0 ? std::fmod(static_cast<double>(now_us) / 1e6, period) : 0.0;
      ms = trace.back().second;
      for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        if (t >= trace[i].first && t <= trace[i + 1].first) {
          double span = trace[i + 1].first - trace[i].first;
          double frac = span > 0.0 ? (t - trace[i].first) / span : 0.0;
          ms = trace[i].second + frac * (trace[i + 1].second - trace[i].second);
          break;
        }
      }
      if (t < trace.front().first) ms = trace.front().second;
      break;
    }
  }
  return static_cast<std::uint64_t>(std::llround(ms * 1000.0));
}

void LossModel::validate() const {
  if (!(floor >= 0.0 && floor <= cap && cap <= 1.0)) {
    throw std::invalid_argument("loss model requires 0 <= floor <= cap <= 1");
  }
  if (!(steepness_k > 0.0)) throw std::invalid_argument("loss steepness must be > 0");
}

double loss_probability(const LossModel& m, double snr_db) {
  double p = 1.0 / (1.0 + std::exp(m.steepness_k * (snr_db - m.snr_mid_db)));
  return std::clamp(p, m.floor, m.cap);
}

void LinkProfile::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(forward_rate_bps > 0 && return_rate_bps > 0, "link rates must be > 0");
  require(mtu_bytes >= 576, "mtu must be >= 576");
  require(attenuation_forward_db >= 0.0 && attenuation_return_db >= 0.0,
          "attenuation must be >= 0");
  require(queue_capacity >= 1, "queue capacity must be >= 1");
  delay_forward.validate();
  delay_return.validate();
  loss.validate();
}

double effective_snr(const LinkProfile& p, Direction d, std::uint64_t) {
  double atten =
      d == Direction::Forward ? p.attenuation_forward_db : p.attenuation_return_db;
  return std::max(0.0, p.clear_sky_snr_db - atten);
}

SatLink::SatLink(Executor& exec, LinkProfile profile, bool tap_enabled)
    : exec_(exec),
      profile_(std::move(profile)),
      loss_rng_(RngStream::mix(profile_.seed, 0x6c696e6b)),
      jitter_rng_(RngStream::mix(profile_.seed, 0x6a697474)),
      tap_enabled_(tap_enabled) {
  profile_.validate();
}

DeliveryOutcome SatLink::transmit(Direction d, ByteView payload) {
  if (payload.size() > profile_.mtu_bytes) throw MtuExceeded();
  DirState& st = dir(d);
  const std::uint64_t now = exec_.now_us();
  st.stats.sent++;

  auto record = [&](std::optional<std::uint64_t> deliver_at) {
    if (!tap_enabled_) return;
    TapRecord r;
    r.direction = d;
    r.send_time_us = now;
    r.deliver_time_us = deliver_at;
    r.payload.assign(payload.begin(), payload.end());
    tap_.push_back(std::move(r));
  };

  // Queue admission: datagrams waiting behind the one in service.
  if (st.busy_until_us > now && st.queued >= profile_.queue_capacity) {
    st.stats.dropped_overflow++;
    record(std::nullopt);
    return DeliveryOutcome::DroppedQueueOverflow;
  }

  const std::uint64_t start = std::max(now, st.busy_until_us);
  const std::uint64_t bits =
      8ull * (static_cast<std::uint64_t>(payload.size()) + profile_.overhead_bytes);
  const std::uint64_t tx_us =
      (bits * 1'000'000ull + rate_bps(d) - 1) / rate_bps(d);  // ceil
  const bool was_busy = st.busy_until_us > now;
  st.busy_until_us = start + tx_us;
  if (was_busy) {
    st.queued++;
    // The queue drains one slot when this datagram enters service.
    exec_.schedule(start - now, [this, d] {
      DirState& s = dir(d);
      if (s.queued > 0) s.queued--;
    });
  }

  const double p_loss = loss_probability(profile_.loss, effective_snr(profile_, d, now));
  const bool lost = loss_rng_.bernoulli(p_loss);
  if (lost) {
    st.stats.dropped_loss++;
    record(std::nullopt);
    return DeliveryOutcome::DroppedChannelLoss;
  }

  std::uint64_t deliver_at = st.busy_until_us + delay_model(d).one_way_delay_us(now);
  if (profile_.reorder_jitter_us > 0) {
    deliver_at += jitter_rng_.uniform_below(profile_.reorder_jitter_us);
  } else if (deliver_at < st.last_delivery_us) {
    // Keep the channel FIFO when propagation delay is shrinking (LEO).
    deliver_at = st.last_delivery_us;
  }
  st.last_delivery_us = deliver_at;
  st.stats.delivered++;
  record(deliver_at);

  Bytes copy(payload.begin(), payload.end());
  exec_.schedule(deliver_at - now, [this, d, data = std::move(copy)]() mutable {
    DirState& s = dir(d);
    if (s.sink) s.sink(std::move(data));
  });
  return DeliveryOutcome::Accepted;
}

void SatLink::export_tap(std::ostream& os) const {
  for (const auto& r : tap_) {
    Bytes buf;
    put_u8(buf, static_cast<std::uint8_t>(r.direction));
    put_u64be(buf, r.send_time_us);
    put_u64be(buf, r.deliver_time_us.value_or(std::numeric_limits<std::uint64_t>::max()));
    put_u32be(buf, static_cast<std::uint32_t>(r.payload.size()));
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    os.write(reinterpret_cast<const char*>(r.payload.data()),
             static_cast<std::streamsize>(r.payload.size()));
  }
}

bool SatLink::tap_contains(ByteView needle) const {
  if (needle.empty()) return true;
  for (const auto& r : tap_) {
    if (r.payload.size() < needle.size()) continue;
    auto it = std::search(r.payload.begin(), r.payload.end(), needle.begin(), needle.end());
    if (it != r.payload.end()) return true;
  }
  return false;
}

}  // namespace satpep
