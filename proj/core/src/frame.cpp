#include "satpep/frame.hpp"

#include "satpep/varint.hpp"

namespace satpep {
namespace {

constexpr std::uint8_t kTypePadding = 0x00;
constexpr std::uint8_t kTypePing = 0x01;
constexpr std::uint8_t kTypeStream = 0x02;     // fin clear
constexpr std::uint8_t kTypeStreamFin = 0x03;  // fin set
constexpr std::uint8_t kTypeAck = 0x04;
constexpr std::uint8_t kTypeResetStream = 0x05;
constexpr std::uint8_t kTypeClose = 0x06;

}  // namespace

void encode_packet_header(Bytes& out, const PacketHeader& h) {
  put_u8(out, h.version);
  put_u8(out, h.flags);
  put_u64be(out, h.session_id);
  put_u64be(out, h.packet_number);
}

std::optional<PacketHeader> decode_packet_header(ByteView datagram) {
  if (datagram.size() < kPacketHeaderSize) return std::nullopt;
  PacketHeader h;
  h.version = datagram[0];
  h.flags = datagram[1];
  h.session_id = get_u64be(datagram.data() + 2);
  h.packet_number = get_u64be(datagram.data() + 10);
  if (h.version != 0x01) return std::nullopt;
  return h;
}

bool is_ack_eliciting(const Frame& f) {
  return !std::holds_alternative<AckFrame>(f) && !std::holds_alternative<PaddingFrame>(f);
}

std::size_t stream_frame_overhead(std::uint64_t stream_id, std::uint64_t offset) {
  return 1 + varint_size(stream_id) + varint_size(offset) + 2;
}

std::size_t frame_size(const Frame& f) {
  struct Sizer {
    std::size_t operator()(const PaddingFrame& p) const { return 1 + varint_size(p.len) + p.len; }
    std::size_t operator()(const PingFrame&) const { return 1; }
    std::size_t operator()(const StreamFrame& s) const {
      return stream_frame_overhead(s.stream_id, s.offset) + s.data.size();
    }
    std::size_t operator()(const AckFrame& a) const {
      std::size_t n = 1 + varint_size(a.largest_acked) + varint_size(a.ack_delay_us) +
                      varint_size(a.ranges.size());
      for (const auto& r : a.ranges) n += varint_size(r.gap) + varint_size(r.run);
      return n;
    }
    std::size_t operator()(const ResetStreamFrame& r) const {
      return 1 + varint_size(r.stream_id) + 2;
    }
    std::size_t operator()(const CloseFrame&) const { return 3; }
  };
  return std::visit(Sizer{}, f);
}

void encode_frame(Bytes& out, const Frame& f) {
  struct Encoder {
    Bytes& out;
    void operator()(const PaddingFrame& p) const {
      put_u8(out, kTypePadding);
      put_varint(out, p.len);
      out.insert(out.end(), p.len, 0);
    }
    void operator()(const PingFrame&) const { put_u8(out, kTypePing); }
    void operator()(const StreamFrame& s) const {
      put_u8(out, s.fin ? kTypeStreamFin : kTypeStream);
      put_varint(out, s.stream_id);
      put_varint(out, s.offset);
      put_u16be(out, static_cast<std::uint16_t>(s.data.size()));
      append(out, s.data);
    }
    void operator()(const AckFrame& a) const {
      put_u8(out, kTypeAck);
      put_varint(out, a.largest_acked);
      put_varint(out, a.ack_delay_us);
      put_varint(out, a.ranges.size());
      for (const auto& r : a.ranges) {
        put_varint(out, r.gap);
        put_varint(out, r.run);
      }
    }
    void operator()(const ResetStreamFrame& r) const {
      put_u8(out, kTypeResetStream);
      put_varint(out, r.stream_id);
      put_u16be(out, r.error_code);
    }
    void operator()(const CloseFrame& c) const {
      put_u8(out, kTypeClose);
      put_u16be(out, c.error_code);
    }
  };
  std::visit(Encoder{out}, f);
}

void encode_frames(Bytes& out, const std::vector<Frame>& frames) {
  for (const auto& f : frames) encode_frame(out, f);
}

std::optional<std::vector<Frame>> decode_frames(ByteView data) {
  std::vector<Frame> frames;
  ByteReader r(data);
  while (r.ok() && r.remaining() > 0) {
    std::uint8_t type = r.u8();
    switch (type) {
      case kTypePadding: {
        auto len = get_varint(r);
        if (!len) return std::nullopt;
        r.take(*len);
        if (!r.ok()) return std::nullopt;
        frames.push_back(PaddingFrame{static_cast<std::uint32_t>(*len)});
        break;
      }
      case kTypePing:
        frames.push_back(PingFrame{});
        break;
      case kTypeStream:
      case kTypeStreamFin: {
        StreamFrame s;
        auto id = get_varint(r);
        auto off = get_varint(r);
        if (!id || !off) return std::nullopt;
        std::uint16_t len = r.u16be();
        ByteView payload = r.take(len);
        if (!r.ok()) return std::nullopt;
        s.stream_id = *id;
        s.offset = *off;
        s.fin = (type == kTypeStreamFin);
        s.data.assign(payload.begin(), payload.end());
        frames.push_back(std::move(s));
        break;
      }
      case kTypeAck: {
        AckFrame a;
        auto largest = get_varint(r);
        auto delay = get_varint(r);
        auto count = get_varint(r);
        if (!largest || !delay || !count || *count > 1024) return std::nullopt;
        a.largest_acked = *largest;
        a.ack_delay_us = *delay;
        for (std::uint64_t i = 0; i < *count; ++i) {
          auto gap = get_varint(r);
          auto run = get_varint(r);
          if (!gap || !run) return std::nullopt;
          a.ranges.push_back(AckRange{*gap, *run});
        }
        frames.push_back(std::move(a));
        break;
      }
      case kTypeResetStream: {
        auto id = get_varint(r);
        if (!id) return std::nullopt;
        std::uint16_t code = r.u16be();
        if (!r.ok()) return std::nullopt;
        frames.push_back(ResetStreamFrame{*id, code});
        break;
      }
      case kTypeClose: {
        std::uint16_t code = r.u16be();
        if (!r.ok()) return std::nullopt;
        frames.push_back(CloseFrame{code});
        break;
      }
      default:
        return std::nullopt;
    }
  }
  if (!r.ok()) return std::nullopt;
  return frames;
}

}  // namespace satpep
