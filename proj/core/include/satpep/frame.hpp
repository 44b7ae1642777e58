#pragma once

#include "satpep/bytes.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace satpep {

// Tunnel datagram layout:
//   PacketHeader (18 bytes) || protected frame bytes || 16-byte AEAD tag
// Handshake datagrams (flags bit 0) carry a plaintext body instead.
struct PacketHeader {
  std::uint8_t version = 0x01;
  std::uint8_t flags = 0;
  std::uint64_t session_id = 0;
  std::uint64_t packet_number = 0;

  bool handshake() const { return (flags & 0x01) != 0; }
};

inline constexpr std::size_t kPacketHeaderSize = 18;
inline constexpr std::uint8_t kFlagHandshake = 0x01;
inline constexpr std::uint8_t kHandshakeInit = 0x01;
inline constexpr std::uint8_t kHandshakeResp = 0x02;

void encode_packet_header(Bytes& out, const PacketHeader& h);
std::optional<PacketHeader> decode_packet_header(ByteView datagram);

struct PaddingFrame {
  std::uint32_t len = 0;
};
struct PingFrame {};
struct StreamFrame {
  std::uint64_t stream_id = 0;
  std::uint64_t offset = 0;
  bool fin = false;
  Bytes data;
};
struct AckRange {
  std::uint64_t gap = 0;  // unacked packets below the previous range (0 for the first)
  std::uint64_t run = 0;  // acked packets in this range, counting down
};
struct AckFrame {
  std::uint64_t largest_acked = 0;
  std::uint64_t ack_delay_us = 0;
  std::vector<AckRange> ranges;
};
struct ResetStreamFrame {
  std::uint64_t stream_id = 0;
  std::uint16_t error_code = 0;
};
struct CloseFrame {
  std::uint16_t error_code = 0;
};

using Frame =
    std::variant<PaddingFrame, PingFrame, StreamFrame, AckFrame, ResetStreamFrame, CloseFrame>;

bool is_ack_eliciting(const Frame& f);

// Wire size of one frame including the type byte.
std::size_t frame_size(const Frame& f);

// STREAM frame overhead (everything but the payload bytes) for the given ids.
std::size_t stream_frame_overhead(std::uint64_t stream_id, std::uint64_t offset);

void encode_frame(Bytes& out, const Frame& f);
void encode_frames(Bytes& out, const std::vector<Frame>& frames);

// Returns nullopt on any malformed input; a datagram either parses fully or
// is discarded.
std::optional<std::vector<Frame>> decode_frames(ByteView data);

}  // namespace satpep
