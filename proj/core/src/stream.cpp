#include "satpep/stream.hpp"

namespace satpep {

std::shared_ptr<Pipe> Pipe::between(ByteStreamPtr a, ByteStreamPtr b) {
  auto pipe = std::shared_ptr<Pipe>(new Pipe());
  pipe->a_ = std::move(a);
  pipe->b_ = std::move(b);
  pipe->wire(pipe, true);
  pipe->wire(pipe, false);
  return pipe;
}

void Pipe::wire(const std::shared_ptr<Pipe>& self, bool a_to_b) {
  ByteStream& from = a_to_b ? *a_ : *b_;
  std::weak_ptr<Pipe> weak = self;

  from.on_data = [weak, a_to_b](ByteView data) {
    auto p = weak.lock();
    if (!p) return;
    ByteStreamPtr& dst = a_to_b ? p->b_ : p->a_;
    if (dst) dst->write(data);
  };
  from.on_fin = [weak, a_to_b] {
    auto p = weak.lock();
    if (!p) return;
    ByteStreamPtr& dst = a_to_b ? p->b_ : p->a_;
    if (dst) dst->fin();
    (a_to_b ? p->a_done_ : p->b_done_) = true;
    if (p->finished()) {
      p->a_.reset();
      p->b_.reset();
    }
  };
  from.on_reset = [weak, a_to_b](std::uint16_t code) {
    auto p = weak.lock();
    if (!p) return;
    ByteStreamPtr& dst = a_to_b ? p->b_ : p->a_;
    if (dst) dst->reset(code);
    p->a_done_ = p->b_done_ = true;
    p->a_.reset();
    p->b_.reset();
  };
}

}  // namespace satpep
