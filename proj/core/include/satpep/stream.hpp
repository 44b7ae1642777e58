#pragma once

#include "satpep/bytes.hpp"

#include <cstdint>
#include <functional>
#include <memory>

namespace satpep {

// Reliable duplex byte stream handle. Mini-TCP connections, tunnel streams,
// and the wall-clock TCP wrapper all expose this surface so relay plumbing
// is written once.
class ByteStream {
 public:
  virtual ~ByteStream() = default;

  virtual void write(ByteView data) = 0;
  virtual void fin() = 0;
  virtual void reset(std::uint16_t error_code) = 0;

  std::function<void(ByteView)> on_data;
  std::function<void()> on_fin;
  std::function<void(std::uint16_t)> on_reset;
};

using ByteStreamPtr = std::shared_ptr<ByteStream>;

// Bidirectional byte pump: data, half-closes, and resets propagate from each
// side to the other. The caller owns the returned handle; dropping it stops
// the relay. Endpoint references are released once both directions close.
class Pipe {
 public:
  static std::shared_ptr<Pipe> between(ByteStreamPtr a, ByteStreamPtr b);

  bool finished() const { return a_done_ && b_done_; }

 private:
  Pipe() = default;
  void wire(const std::shared_ptr<Pipe>& self, bool a_to_b);

  ByteStreamPtr a_;
  ByteStreamPtr b_;
  bool a_done_ = false;
  bool b_done_ = false;
};

using PipePtr = std::shared_ptr<Pipe>;

}  // namespace satpep
