#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace satpep {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

inline void put_u16be(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32be(Bytes& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

inline void put_u64be(Bytes& out, std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

inline std::uint16_t get_u16be(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

inline std::uint32_t get_u32be(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

inline std::uint64_t get_u64be(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return v;
}

inline void append(Bytes& out, ByteView data) {
  out.insert(out.end(), data.begin(), data.end());
}

// Bounds-checked sequential reader used by the wire decoders.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  bool ok() const { return ok_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  std::uint8_t u8() { return ok_ && need(1) ? data_[pos_++] : fail(); }
  std::uint16_t u16be() {
    if (!ok_ || !need(2)) return fail();
    auto v = get_u16be(data_.data() + pos_);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32be() {
    if (!ok_ || !need(4)) return fail();
    auto v = get_u32be(data_.data() + pos_);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64be() {
    if (!ok_ || !need(8)) return fail();
    auto v = get_u64be(data_.data() + pos_);
    pos_ += 8;
    return v;
  }
  ByteView take(std::size_t n) {
    if (!ok_ || !need(n)) {
      fail();
      return {};
    }
    ByteView v = data_.subspan(pos_, n);
    pos_ += n;
    return v;
  }

 private:
  bool need(std::size_t n) {
    if (data_.size() - pos_ < n) {
      ok_ = false;
      return false;
    }
    return true;
  }
  std::uint8_t fail() {
    ok_ = false;
    return 0;
  }

  ByteView data_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

}  // namespace satpep
