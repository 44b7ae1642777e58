#include "satpep/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>
#include <string>

namespace satpep {
namespace {

using Hmac = std::array<std::uint8_t, crypto_auth_hmacsha256_BYTES>;

Hmac hmac_sha256(ByteView key, ByteView data) {
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, data.data(), data.size());
  Hmac out;
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

// RFC 5869 expand, enough output for one key+iv per call site.
void hkdf_expand(const Hmac& prk, std::string_view info, std::span<std::uint8_t> out) {
  std::uint8_t counter = 1;
  std::size_t written = 0;
  Bytes t;
  while (written < out.size()) {
    Bytes input = t;
    input.insert(input.end(), info.begin(), info.end());
    input.push_back(counter++);
    Hmac h = hmac_sha256(ByteView(prk.data(), prk.size()), input);
    t.assign(h.begin(), h.end());
    std::size_t n = std::min(t.size(), out.size() - written);
    std::memcpy(out.data() + written, t.data(), n);
    written += n;
  }
}

AeadKey expand_key(const Hmac& prk, const std::string& dir, std::string_view prefix) {
  AeadKey k;
  hkdf_expand(prk, std::string(prefix) + " " + dir + " key", k.key);
  hkdf_expand(prk, std::string(prefix) + " " + dir + " iv", k.iv);
  return k;
}

}  // namespace

void crypto_init() {
  if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
}

SessionKeys derive_session_keys(const Psk& psk, const Random32& client_random,
                                const Random32& server_random, bool is_client,
                                std::string_view label_prefix) {
  crypto_init();
  Bytes salt;
  salt.insert(salt.end(), client_random.begin(), client_random.end());
  salt.insert(salt.end(), server_random.begin(), server_random.end());
  // HKDF extract: PRK = HMAC(salt, ikm).
  Hmac prk = hmac_sha256(salt, ByteView(psk.data(), psk.size()));

  AeadKey c2s = expand_key(prk, "c2s", label_prefix);
  AeadKey s2c = expand_key(prk, "s2c", label_prefix);

  SessionKeys keys;
  keys.client_random = client_random;
  keys.server_random = server_random;
  keys.tx = is_client ? c2s : s2c;
  keys.rx = is_client ? s2c : c2s;
  return keys;
}

std::array<std::uint8_t, kAeadIvSize> make_nonce(const AeadKey& k, std::uint64_t counter) {
  auto nonce = k.iv;
  for (int i = 0; i < 8; ++i) {
    nonce[kAeadIvSize - 1 - i] ^= static_cast<std::uint8_t>(counter >> (8 * i));
  }
  return nonce;
}

void aead_seal(const AeadKey& k, std::uint64_t counter, ByteView aad, ByteView plaintext,
               Bytes& out) {
  auto nonce = make_nonce(k, counter);
  std::size_t base = out.size();
  out.resize(base + plaintext.size() + kAeadTagSize);
  unsigned long long clen = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(out.data() + base, &clen, plaintext.data(),
                                            plaintext.size(), aad.data(), aad.size(), nullptr,
                                            nonce.data(), k.key.data());
  out.resize(base + clen);
}

bool aead_open(const AeadKey& k, std::uint64_t counter, ByteView aad, ByteView ciphertext,
               Bytes& out) {
  if (ciphertext.size() < kAeadTagSize) return false;
  auto nonce = make_nonce(k, counter);
  std::size_t base = out.size();
  out.resize(base + ciphertext.size() - kAeadTagSize);
  unsigned long long mlen = 0;
  int rc = crypto_aead_chacha20poly1305_ietf_decrypt(out.data() + base, &mlen, nullptr,
                                                     ciphertext.data(), ciphertext.size(),
                                                     aad.data(), aad.size(), nonce.data(),
                                                     k.key.data());
  if (rc != 0) {
    out.resize(base);
    return false;
  }
  out.resize(base + mlen);
  return true;
}

Psk parse_psk_hex(std::string_view hex) {
  if (hex.size() != 2 * kPskSize) throw std::invalid_argument("psk must be 64 hex chars");
  Psk psk{};
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit in psk");
  };
  for (std::size_t i = 0; i < kPskSize; ++i) {
    psk[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return psk;
}

}  // namespace satpep
