#include "satpep/net.hpp"

#include "satpep/tcp.hpp"

#include <algorithm>
#include <charconv>

namespace satpep {

std::string Ipv4Addr::to_string() const {
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (i) s.push_back('.');
    s += std::to_string(b[i]);
  }
  return s;
}

std::optional<Ipv4Addr> Ipv4Addr::parse(const std::string& s) {
  Ipv4Addr a;
  const char* p = s.data();
  const char* end = s.data() + s.size();
  for (int i = 0; i < 4; ++i) {
    unsigned v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || v > 255) return std::nullopt;
    a.b[i] = static_cast<std::uint8_t>(v);
    p = next;
    if (i < 3) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
  }
  if (p != end) return std::nullopt;
  return a;
}

std::string FourTuple::to_string() const {
  return src_ip.to_string() + ":" + std::to_string(src_port) + "->" + dst_ip.to_string() + ":" +
         std::to_string(dst_port);
}

Bytes encode_net_datagram(const NetDatagram& d) {
  Bytes out;
  out.reserve(kNetHeaderSize + d.payload.size());
  append(out, ByteView(d.src.b.data(), 4));
  append(out, ByteView(d.dst.b.data(), 4));
  put_u8(out, d.proto);
  append(out, d.payload);
  return out;
}

std::optional<NetDatagram> decode_net_datagram(ByteView wire) {
  if (wire.size() < kNetHeaderSize) return std::nullopt;
  NetDatagram d;
  std::copy_n(wire.begin(), 4, d.src.b.begin());
  std::copy_n(wire.begin() + 4, 4, d.dst.b.begin());
  d.proto = wire[8];
  d.payload.assign(wire.begin() + kNetHeaderSize, wire.end());
  return d;
}

Node::Node(Executor& exec, RngStream rng, std::string name, Ipv4Addr addr)
    : exec_(exec), rng_(std::move(rng)), name_(std::move(name)), addr_(addr) {}

Node::~Node() = default;

void Node::add_iface(std::unique_ptr<Iface> iface) { ifaces_.push_back(std::move(iface)); }

void Node::add_route(Ipv4Addr dst, Iface* via) { host_routes_[dst.u32()] = via; }

void Node::add_prefix_route(Ipv4Addr net, int prefix_bits, Iface* via) {
  std::uint32_t mask = prefix_bits == 0 ? 0 : ~std::uint32_t{0} << (32 - prefix_bits);
  prefix_routes_.emplace_back(net.u32() & mask, mask, via);
  std::sort(prefix_routes_.begin(), prefix_routes_.end(),
            [](const auto& a, const auto& b) { return std::get<1>(a) > std::get<1>(b); });
}

Iface* Node::route_for(Ipv4Addr dst) {
  if (auto it = host_routes_.find(dst.u32()); it != host_routes_.end()) return it->second;
  for (const auto& [net, mask, via] : prefix_routes_) {
    if ((dst.u32() & mask) == net) return via;
  }
  return default_route_;
}

void Node::receive(Bytes wire) {
  auto d = decode_net_datagram(wire);
  if (!d) return;  // malformed transit noise is dropped
  if (d->dst == addr_) {
    deliver_local(std::move(*d));
    return;
  }
  // Transit traffic: transparent TCP interception gets first claim, then a
  // datagram-level tunnel hook (VPN), then plain forwarding.
  if (tcp_ && d->proto == kProtoTcp && tcp_->maybe_intercept(*d)) return;
  if (forward_hook_ && forward_hook_(*d)) return;
  send(std::move(*d));
}

void Node::send(NetDatagram d) {
  if (d.dst == addr_) {
    deliver_local(std::move(d));
    return;
  }
  Iface* via = route_for(d.dst);
  if (via == nullptr) return;  // no route: blackhole
  via->send(d);
}

void Node::deliver_local(NetDatagram d) {
  if (d.proto == kProtoTcp) {
    tcp().on_segment(d);
    return;
  }
  if (d.proto == kProtoUdp) {
    if (d.payload.size() < kUdpHeaderSize) return;
    std::uint16_t src_port = get_u16be(d.payload.data());
    std::uint16_t dst_port = get_u16be(d.payload.data() + 2);
    auto it = udp_ports_.find(dst_port);
    if (it == udp_ports_.end()) return;
    Bytes payload(d.payload.begin() + kUdpHeaderSize, d.payload.end());
    it->second(d.src, src_port, std::move(payload));
  }
}

void Node::bind_udp(std::uint16_t port, UdpHandler handler) {
  udp_ports_[port] = std::move(handler);
}

void Node::unbind_udp(std::uint16_t port) { udp_ports_.erase(port); }

void Node::send_udp(Ipv4Addr dst, std::uint16_t src_port, std::uint16_t dst_port,
                    ByteView payload) {
  NetDatagram d;
  d.src = addr_;
  d.dst = dst;
  d.proto = kProtoUdp;
  d.payload.reserve(kUdpHeaderSize + payload.size());
  put_u16be(d.payload, src_port);
  put_u16be(d.payload, dst_port);
  append(d.payload, payload);
  send(std::move(d));
}

TcpStack& Node::tcp() {
  if (!tcp_) tcp_ = std::make_unique<TcpStack>(*this, TcpConfig{});
  return *tcp_;
}

World::World(std::uint64_t seed, std::uint64_t dispatch_cap)
    : seed_(seed), loop_(dispatch_cap), rng_(seed) {}

World::~World() = default;

Node& World::add_node(const std::string& name, Ipv4Addr addr) {
  nodes_.push_back(std::make_unique<Node>(loop_, rng_.fork(RngStream::mix(addr.u32(), 0x6e6f6465)),
                                          name, addr));
  return *nodes_.back();
}

SatLink& World::connect(Node& a, Node& b, const LinkProfile& profile, bool tap_enabled) {
  links_.push_back(std::make_unique<SatLink>(loop_, profile, tap_enabled));
  SatLink& link = *links_.back();
  auto iface_a = std::make_unique<Iface>(link, Direction::Forward);
  auto iface_b = std::make_unique<Iface>(link, Direction::Return);
  link.set_sink(Direction::Forward, [nb = &b](Bytes wire) { nb->receive(std::move(wire)); });
  link.set_sink(Direction::Return, [na = &a](Bytes wire) { na->receive(std::move(wire)); });
  Iface* ra = iface_a.get();
  Iface* rb = iface_b.get();
  a.add_iface(std::move(iface_a));
  b.add_iface(std::move(iface_b));
  // Convenience host routes toward the directly attached peer.
  a.add_route(b.addr(), ra);
  b.add_route(a.addr(), rb);
  return link;
}

}  // namespace satpep
