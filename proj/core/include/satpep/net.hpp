#pragma once

#include "satpep/bytes.hpp"
#include "satpep/event_loop.hpp"
#include "satpep/link.hpp"
#include "satpep/rng.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace satpep {

struct Ipv4Addr {
  std::array<std::uint8_t, 4> b{};

  constexpr Ipv4Addr() = default;
  constexpr Ipv4Addr(std::uint8_t a0, std::uint8_t a1, std::uint8_t a2, std::uint8_t a3)
      : b{a0, a1, a2, a3} {}

  std::uint32_t u32() const {
    return (static_cast<std::uint32_t>(b[0]) << 24) | (static_cast<std::uint32_t>(b[1]) << 16) |
           (static_cast<std::uint32_t>(b[2]) << 8) | b[3];
  }
  static Ipv4Addr from_u32(std::uint32_t v) {
    return Ipv4Addr(static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
                    static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v));
  }
  std::string to_string() const;
  static std::optional<Ipv4Addr> parse(const std::string& s);

  auto operator<=>(const Ipv4Addr&) const = default;
};

struct FourTuple {
  Ipv4Addr src_ip;
  Ipv4Addr dst_ip;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;

  FourTuple reversed() const { return FourTuple{dst_ip, src_ip, dst_port, src_port}; }
  std::string to_string() const;
  auto operator<=>(const FourTuple&) const = default;
};

inline constexpr std::uint8_t kProtoTcp = 6;
inline constexpr std::uint8_t kProtoUdp = 17;

// Node-to-node wire unit: src(4) dst(4) proto(1) payload.
struct NetDatagram {
  Ipv4Addr src;
  Ipv4Addr dst;
  std::uint8_t proto = 0;
  Bytes payload;
};

inline constexpr std::size_t kNetHeaderSize = 9;
inline constexpr std::size_t kUdpHeaderSize = 4;  // src_port, dst_port (BE)

Bytes encode_net_datagram(const NetDatagram& d);
std::optional<NetDatagram> decode_net_datagram(ByteView wire);

class Node;
class TcpStack;

// One attachment point of a link at a node.
class Iface {
 public:
  Iface(SatLink& link, Direction tx_dir) : link_(&link), tx_dir_(tx_dir) {}
  DeliveryOutcome send(const NetDatagram& d) { return link_->transmit(tx_dir_, encode_net_datagram(d)); }
  SatLink& link() { return *link_; }

 private:
  SatLink* link_;
  Direction tx_dir_;
};

using UdpHandler =
    std::function<void(Ipv4Addr src_ip, std::uint16_t src_port, Bytes payload)>;

class Node {
 public:
  Node(Executor& exec, RngStream rng, std::string name, Ipv4Addr addr);
  ~Node();

  const std::string& name() const { return name_; }
  Ipv4Addr addr() const { return addr_; }
  Executor& exec() { return exec_; }
  RngStream& rng() { return rng_; }

  void add_iface(std::unique_ptr<Iface> iface);
  void add_route(Ipv4Addr dst, Iface* via);
  // Prefix route over the first `prefix_bits` bits.
  void add_prefix_route(Ipv4Addr net, int prefix_bits, Iface* via);
  void set_default_route(Iface* via) { default_route_ = via; }

  // Entry point for datagrams arriving from an attached link.
  void receive(Bytes wire);
  // Entry point for locally generated datagrams (also used to re-inject
  // decapsulated tunnel traffic).
  void send(NetDatagram d);

  // Called before forwarding a transit datagram; return true to consume it.
  void set_forward_hook(std::function<bool(NetDatagram&)> hook) { forward_hook_ = std::move(hook); }

  void bind_udp(std::uint16_t port, UdpHandler handler);
  void unbind_udp(std::uint16_t port);
  void send_udp(Ipv4Addr dst, std::uint16_t src_port, std::uint16_t dst_port, ByteView payload);

  TcpStack& tcp();

  std::uint16_t alloc_ephemeral_port() { return next_ephemeral_++; }

 private:
  Iface* route_for(Ipv4Addr dst);
  void deliver_local(NetDatagram d);

  Executor& exec_;
  RngStream rng_;
  std::string name_;
  Ipv4Addr addr_;
  std::vector<std::unique_ptr<Iface>> ifaces_;
  std::map<std::uint32_t, Iface*> host_routes_;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, Iface*>> prefix_routes_;  // (net, mask, via)
  Iface* default_route_ = nullptr;
  std::function<bool(NetDatagram&)> forward_hook_;
  std::map<std::uint16_t, UdpHandler> udp_ports_;
  std::unique_ptr<TcpStack> tcp_;
  std::uint16_t next_ephemeral_ = 49152;
};

// Owns the event loop, nodes, and links of one deterministic scenario run.
class World {
 public:
  explicit World(std::uint64_t seed, std::uint64_t dispatch_cap = 100'000'000ull);
  ~World();

  EventLoop& loop() { return loop_; }
  RngStream& rng() { return rng_; }
  std::uint64_t seed() const { return seed_; }

  Node& add_node(const std::string& name, Ipv4Addr addr);

  // Connects a <-> b; Direction::Forward flows a -> b. Returns the link so
  // callers can inspect the tap.
  SatLink& connect(Node& a, Node& b, const LinkProfile& profile, bool tap_enabled);

 private:
  std::uint64_t seed_;
  EventLoop loop_;
  RngStream rng_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<std::unique_ptr<SatLink>> links_;
};

}  // namespace satpep
