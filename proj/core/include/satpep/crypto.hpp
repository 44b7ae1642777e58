#pragma once

#include "satpep/bytes.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace satpep {

inline constexpr std::size_t kAeadKeySize = 32;
inline constexpr std::size_t kAeadIvSize = 12;
inline constexpr std::size_t kAeadTagSize = 16;
inline constexpr std::size_t kRandomSize = 32;
inline constexpr std::size_t kPskSize = 32;

using Psk = std::array<std::uint8_t, kPskSize>;
using Random32 = std::array<std::uint8_t, kRandomSize>;

// One AEAD direction: ChaCha20-Poly1305 (IETF) key plus the base IV that is
// XORed with the record/packet counter to form each nonce.
struct AeadKey {
  std::array<std::uint8_t, kAeadKeySize> key{};
  std::array<std::uint8_t, kAeadIvSize> iv{};
};

struct SessionKeys {
  Random32 client_random{};
  Random32 server_random{};
  AeadKey tx;
  AeadKey rx;
};

void crypto_init();

// HKDF-SHA256 with salt = client_random || server_random and ikm = psk.
// `label_prefix` separates protocol families ("tun" for the stream tunnel,
// "vpn" for the carrier records) so keys never cross protocols.
SessionKeys derive_session_keys(const Psk& psk, const Random32& client_random,
                                const Random32& server_random, bool is_client,
                                std::string_view label_prefix);

// nonce = iv XOR big-endian counter in the trailing 8 bytes.
std::array<std::uint8_t, kAeadIvSize> make_nonce(const AeadKey& k, std::uint64_t counter);

// Appends ciphertext || 16-byte tag to `out`.
void aead_seal(const AeadKey& k, std::uint64_t counter, ByteView aad, ByteView plaintext,
               Bytes& out);

// Returns false on authentication failure; on success appends plaintext.
bool aead_open(const AeadKey& k, std::uint64_t counter, ByteView aad, ByteView ciphertext,
               Bytes& out);

Psk parse_psk_hex(std::string_view hex);  // throws std::invalid_argument

}  // namespace satpep
