#include "figoa/hashstate.hpp"

#include <cstring>

namespace figoa {

namespace {

constexpr std::array<std::uint32_t, 8> kIv = {
    0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
    0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u,
};

constexpr std::uint32_t kRound[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
};

inline std::uint32_t rotr(std::uint32_t x, unsigned n) {
  return (x >> n) | (x << (32 - n));
}

void compress_block(std::array<std::uint32_t, 8>& s, const std::uint8_t* block) {
  std::uint32_t w[64];
  for (int i = 0; i < 16; ++i) {
    w[i] = (static_cast<std::uint32_t>(block[4 * i]) << 24) |
           (static_cast<std::uint32_t>(block[4 * i + 1]) << 16) |
           (static_cast<std::uint32_t>(block[4 * i + 2]) << 8) |
           static_cast<std::uint32_t>(block[4 * i + 3]);
  }
  for (int i = 16; i < 64; ++i) {
    std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
    std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
    w[i] = w[i - 16] + s0 + w[i - 7] + s1;
  }

  std::uint32_t a = s[0], b = s[1], c = s[2], d = s[3];
  std::uint32_t e = s[4], f = s[5], g = s[6], h = s[7];
  for (int i = 0; i < 64; ++i) {
    std::uint32_t t1 = h + (rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25)) +
                       ((e & f) ^ (~e & g)) + kRound[i] + w[i];
    std::uint32_t t2 = (rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22)) +
                       ((a & b) ^ (a & c) ^ (b & c));
    h = g;
    g = f;
    f = e;
    e = d + t1;
    d = c;
    c = b;
    b = a;
    a = t1 + t2;
  }
  s[0] += a;
  s[1] += b;
  s[2] += c;
  s[3] += d;
  s[4] += e;
  s[5] += f;
  s[6] += g;
  s[7] += h;
}

} // namespace

HashState new_state() {
  return HashState{kIv, 0};
}

HashState compress(const HashState& state, ByteView data) {
  if (data.empty() || data.size() % kHashBlockSize != 0)
    throw MisalignedInput("compress: data length " + std::to_string(data.size()) +
                          " is not a positive multiple of 64");
  HashState next = state;
  for (std::size_t off = 0; off < data.size(); off += kHashBlockSize)
    compress_block(next.words, data.data() + off);
  next.bytes_processed += data.size();
  return next;
}

Digest finalize(const HashState& state, ByteView tail, std::uint64_t total_len) {
  if (state.bytes_processed + tail.size() != total_len)
    throw LengthMismatch("finalize: absorbed " + std::to_string(state.bytes_processed) +
                         " + tail " + std::to_string(tail.size()) +
                         " != total " + std::to_string(total_len));

  std::array<std::uint32_t, 8> s = state.words;
  std::size_t rem = tail.size();
  std::size_t off = 0;
  while (rem >= kHashBlockSize) {
    compress_block(s, tail.data() + off);
    off += kHashBlockSize;
    rem -= kHashBlockSize;
  }

  // Standard padding: 0x80, zeros, 64-bit message bit length.
  std::uint8_t block[kHashBlockSize];
  std::memset(block, 0, sizeof(block));
  if (rem > 0)
    std::memcpy(block, tail.data() + off, rem);
  block[rem] = 0x80;
  if (rem >= 56) {
    compress_block(s, block);
    std::memset(block, 0, sizeof(block));
  }
  const std::uint64_t bit_len = total_len * 8;
  for (int i = 0; i < 8; ++i)
    block[56 + i] = static_cast<std::uint8_t>(bit_len >> (56 - 8 * i));
  compress_block(s, block);

  Digest d;
  for (int i = 0; i < 8; ++i) {
    d.bytes[4 * i] = static_cast<std::uint8_t>(s[i] >> 24);
    d.bytes[4 * i + 1] = static_cast<std::uint8_t>(s[i] >> 16);
    d.bytes[4 * i + 2] = static_cast<std::uint8_t>(s[i] >> 8);
    d.bytes[4 * i + 3] = static_cast<std::uint8_t>(s[i]);
  }
  return d;
}

Digest sha256(ByteView data) {
  return finalize(new_state(), data, data.size());
}

std::array<std::uint8_t, kEncodedStateSize> serialize_state(const HashState& state) {
  std::array<std::uint8_t, kEncodedStateSize> out{};
  for (int i = 0; i < 8; ++i) {
    out[4 * i] = static_cast<std::uint8_t>(state.words[i] >> 24);
    out[4 * i + 1] = static_cast<std::uint8_t>(state.words[i] >> 16);
    out[4 * i + 2] = static_cast<std::uint8_t>(state.words[i] >> 8);
    out[4 * i + 3] = static_cast<std::uint8_t>(state.words[i]);
  }
  for (int i = 0; i < 8; ++i)
    out[32 + i] = static_cast<std::uint8_t>(state.bytes_processed >> (56 - 8 * i));
  return out;
}

HashState deserialize_state(ByteView encoded) {
  if (encoded.size() != kEncodedStateSize)
    throw BadStateEncoding("state encoding must be 40 bytes, got " +
                           std::to_string(encoded.size()));
  HashState s;
  for (int i = 0; i < 8; ++i)
    s.words[i] = get_u32(encoded.subspan(4 * i, 4));
  s.bytes_processed = get_u64(encoded.subspan(32, 8));
  if (s.bytes_processed % kHashBlockSize != 0)
    throw BadStateEncoding("state byte count " + std::to_string(s.bytes_processed) +
                           " is not a multiple of 64");
  return s;
}

} // namespace figoa
