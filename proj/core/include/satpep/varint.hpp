#pragma once

#include "satpep/bytes.hpp"

#include <cstdint>
#include <optional>

namespace satpep {

// Unsigned LEB128.
inline void put_varint(Bytes& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::size_t varint_size(std::uint64_t v) {
  std::size_t n = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++n;
  }
  return n;
}

inline std::optional<std::uint64_t> get_varint(ByteReader& r) {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    std::uint8_t b = r.u8();
    if (!r.ok()) return std::nullopt;
    v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
    if ((b & 0x80) == 0) {
      // Reject non-canonical zero-padded continuation bytes at the top.
      if (shift == 63 && (b & 0x7E) != 0) return std::nullopt;
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace satpep
