#pragma once

#include <array>
#include <compare>
#include <cstdint>

#include "figoa/bytes.hpp"

namespace figoa {

/// SHA-256 compression block size. Fragment payload offsets and all
/// non-final payload sizes are multiples of this.
inline constexpr std::size_t kHashBlockSize = 64;

inline constexpr std::size_t kDigestSize = 32;

/// Serialized HashState: 8 state words (big-endian) + 64-bit byte count.
inline constexpr std::size_t kEncodedStateSize = 40;

struct Digest {
  std::array<std::uint8_t, kDigestSize> bytes{};

  auto operator<=>(const Digest&) const = default;
  std::string hex() const { return to_hex(bytes); }
};

/// Resumable interior state of a SHA-256 computation: the eight working
/// words after absorbing `bytes_processed` bytes of input. Carried inside
/// content fragments so any holder can continue the hash mid-stream.
///
/// `bytes_processed` is always a multiple of kHashBlockSize; the sub-block
/// remainder of a message is only ever consumed by finalize().
struct HashState {
  std::array<std::uint32_t, 8> words{};
  std::uint64_t bytes_processed = 0;

  auto operator<=>(const HashState&) const = default;
};

/// Fresh state: the standard SHA-256 initialization vector, zero bytes absorbed.
HashState new_state();

/// Absorb `data` (a positive multiple of kHashBlockSize bytes) into a copy
/// of `state`. Throws MisalignedInput otherwise.
HashState compress(const HashState& state, ByteView data);

/// Complete the hash of a `total_len`-byte message whose first
/// `state.bytes_processed` bytes were already absorbed; `tail` supplies the
/// rest (any number of full blocks plus a sub-block remainder). Applies
/// standard SHA-256 length padding. Throws LengthMismatch when
/// state.bytes_processed + tail.size() != total_len.
Digest finalize(const HashState& state, ByteView tail, std::uint64_t total_len);

/// One-shot convenience: finalize(new_state(), data, data.size()).
Digest sha256(ByteView data);

std::array<std::uint8_t, kEncodedStateSize> serialize_state(const HashState& state);

/// Inverse of serialize_state. Throws BadStateEncoding on wrong length or a
/// byte count that is not a multiple of kHashBlockSize.
HashState deserialize_state(ByteView encoded);

} // namespace figoa
