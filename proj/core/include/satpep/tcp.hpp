#pragma once

#include "satpep/net.hpp"
#include "satpep/stream.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace satpep {

// Parameters emulate a modern OS stack; the satellite-optimized relay leg
// overrides initial_cwnd_segments.
struct TcpConfig {
  std::uint32_t mss_bytes = 1160;
  std::uint32_t initial_cwnd_segments = 10;
  std::uint32_t delayed_ack_factor = 2;
  std::uint64_t delayed_ack_timeout_us = 40'000;
  std::uint32_t dupack_threshold = 3;
  std::uint64_t rto_min_us = 200'000;
  std::uint64_t rto_initial_us = 1'000'000;
  std::uint64_t rto_max_us = 60'000'000;
  std::uint32_t syn_retries = 6;
  std::uint32_t max_data_retries = 8;
  std::uint32_t recv_window_bytes = 65'535;
};

enum class TcpError : std::uint8_t {
  None,
  ConnectTimeout,
  ConnectionRefused,
  ConnectionReset,
  RetransmitLimit,
};

const char* to_string(TcpError e);

// Wire layout (15 bytes): src_port u16 BE, dst_port u16 BE, seq u32 BE,
// ack u32 BE, flags u8, window u16 BE; payload follows.
struct TcpSegmentHeader {
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint32_t seq = 0;
  std::uint32_t ack = 0;
  std::uint8_t flags = 0;
  std::uint16_t window = 0;
};

inline constexpr std::size_t kTcpHeaderSize = 15;
inline constexpr std::uint8_t kTcpFin = 0x01;
inline constexpr std::uint8_t kTcpSyn = 0x02;
inline constexpr std::uint8_t kTcpRst = 0x04;
inline constexpr std::uint8_t kTcpAck = 0x10;

void encode_tcp_header(Bytes& out, const TcpSegmentHeader& h);
std::optional<TcpSegmentHeader> decode_tcp_header(ByteView data);

class TcpStack;
class TcpConnection;
using TcpConnPtr = std::shared_ptr<TcpConnection>;

// One reliable byte-stream connection: slow start / congestion avoidance,
// fast retransmit + NewReno-style recovery, RTO with slow-start restart,
// delayed ACKs, half-close, RST. In-order delivery to the application by
// construction (head-of-line blocking included).
class TcpConnection : public ByteStream,
                      public std::enable_shared_from_this<TcpConnection> {
 public:
  ~TcpConnection() override;

  void write(ByteView data) override;
  void fin() override;
  void reset(std::uint16_t error_code) override;

  // Client side: fires once with None on establishment or an error.
  std::function<void(TcpError)> on_connect;

  bool established() const { return state_ == State::Established; }
  TcpError error() const { return error_; }
  FourTuple tuple() const;
  std::uint64_t bytes_delivered() const { return bytes_delivered_; }
  std::uint64_t bytes_acked() const { return snd_una_ > 0 ? snd_una_ - 1 : 0; }
  const CongestionView congestion() const;

  struct CongestionView {
    std::uint64_t cwnd_bytes;
    std::uint64_t ssthresh_bytes;
    std::uint64_t in_flight;
    std::uint64_t srtt_us;
  };

 private:
  friend class TcpStack;
  enum class State : std::uint8_t { SynSent, SynRcvd, Established, Closed };

  TcpConnection(TcpStack& stack, TcpConfig cfg, Ipv4Addr local_ip, std::uint16_t local_port,
                Ipv4Addr remote_ip, std::uint16_t remote_port);

  void start_connect();
  void start_accept(std::uint32_t peer_isn);
  void on_segment(const TcpSegmentHeader& h, ByteView payload);

  void flush();
  void send_segment(std::uint64_t seq_abs, std::size_t len, bool fin_flag, bool force_ack);
  void send_control(std::uint8_t flags, std::uint32_t seq_wire);
  void send_ack_now();
  void maybe_delayed_ack();
  void retransmit_front();
  void arm_rto();
  void cancel_timers();
  void on_rto();
  void handle_ack(std::uint64_t ack_abs, std::size_t payload_len);
  void enter_established();
  void deliver_in_order();
  void fail(TcpError err, bool send_rst);
  void maybe_finish();

  std::uint64_t unwrap_seq(std::uint32_t wire, std::uint64_t near, std::uint32_t isn) const;

  TcpStack& stack_;
  TcpConfig cfg_;
  Ipv4Addr local_ip_;
  Ipv4Addr remote_ip_;
  std::uint16_t local_port_;
  std::uint16_t remote_port_;
  State state_ = State::Closed;
  TcpError error_ = TcpError::None;
  bool is_initiator_ = false;
  bool accept_reported_ = false;

  // Send side. Sequence space is absolute: SYN occupies 0, first payload
  // byte is 1, FIN takes the unit after the last byte.
  std::uint32_t snd_isn_ = 0;
  std::uint32_t rcv_isn_ = 0;
  std::uint64_t snd_una_ = 0;
  std::uint64_t snd_nxt_ = 0;
  std::deque<std::uint8_t> snd_buf_;  // bytes [snd_buf_base_, ...)
  std::uint64_t snd_buf_base_ = 1;
  bool fin_queued_ = false;
  bool fin_sent_ = false;
  bool fin_acked_ = false;
  std::uint64_t fin_abs_ = 0;

  std::uint64_t cwnd_ = 0;
  std::uint64_t ssthresh_ = 0;
  std::uint64_t peer_window_ = 65'535;
  std::uint32_t dupacks_ = 0;
  bool in_recovery_ = false;
  std::uint64_t recover_ = 0;

  std::uint64_t srtt_us_ = 0;
  std::uint64_t rttvar_us_ = 0;
  std::uint64_t rto_us_ = 0;
  std::uint32_t rto_streak_ = 0;
  std::uint32_t syn_sent_count_ = 0;
  bool rtt_sampling_ = false;
  std::uint64_t rtt_sample_end_ = 0;
  std::uint64_t rtt_sample_sent_at_ = 0;
  EventHandle rto_timer_;
  EventHandle delack_timer_;

  // Receive side.
  std::uint64_t rcv_nxt_ = 1;
  std::map<std::uint64_t, Bytes> reorder_;
  std::optional<std::uint64_t> rcv_fin_abs_;
  bool fin_delivered_ = false;
  std::uint32_t segs_since_ack_ = 0;
  std::uint64_t bytes_delivered_ = 0;
};

using TcpAcceptFn = std::function<void(TcpConnPtr)>;
using TcpConnectFn = std::function<void(TcpError)>;
// Invoked for transparently intercepted connections once established;
// `original_destination` carries the four-tuple the client targeted.
using TcpInterceptFn = std::function<void(TcpConnPtr, FourTuple original_destination)>;

class TcpStack {
 public:
  TcpStack(Node& node, TcpConfig default_config);
  ~TcpStack();

  Node& node() { return node_; }
  const TcpConfig& default_config() const { return cfg_; }
  void set_default_config(const TcpConfig& cfg) { cfg_ = cfg; }

  void listen(std::uint16_t port, TcpAcceptFn on_accept);
  TcpConnPtr connect(Ipv4Addr dst_ip, std::uint16_t dst_port, TcpConnectFn on_connect,
                     const TcpConfig* cfg = nullptr);

  // Transparent interception of transit connections (split PEP / QPEP client).
  void set_intercept(TcpInterceptFn fn, const TcpConfig* accept_cfg = nullptr);
  bool has_intercept() const { return static_cast<bool>(intercept_); }

  void on_segment(const NetDatagram& d);   // datagrams addressed to this node
  bool maybe_intercept(NetDatagram& d);    // transit datagrams; true when consumed

  std::size_t active_connections() const { return conns_.size(); }

 private:
  friend class TcpConnection;

  void handle(const NetDatagram& d, bool transit);
  void emit(Ipv4Addr src, Ipv4Addr dst, const TcpSegmentHeader& h, ByteView payload);
  void send_rst_for(const NetDatagram& d, const TcpSegmentHeader& h);
  void remove(const FourTuple& key);

  Node& node_;
  TcpConfig cfg_;
  std::map<FourTuple, TcpConnPtr> conns_;  // keyed remote->local
  std::map<std::uint16_t, TcpAcceptFn> listeners_;
  TcpInterceptFn intercept_;
  TcpConfig intercept_cfg_;
};

}  // namespace satpep
