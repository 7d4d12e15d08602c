#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <variant>

#include "figoa/bytes.hpp"
#include "figoa/crypto.hpp"
#include "figoa/hashstate.hpp"
#include "figoa/name.hpp"

namespace figoa {

/// Maximum encoded size of a Name TLV.
inline constexpr std::size_t kMaxNameEncodedSize = 8192;

/// Smallest MTU any link or interest may advertise: room for a fragment
/// header with a short name, one 64-byte data block, and a trailer.
inline constexpr std::uint32_t kMinViableMtu = 512;

struct Interest {
  Name name;
  std::array<std::uint8_t, 8> nonce{};
  /// Smallest MTU discovered so far on the interest's path, stamped by
  /// each router with the reverse-direction MTU of the arrival link.
  std::optional<std::uint32_t> mu_mtu;

  auto operator<=>(const Interest&) const = default;
};

struct InterestFragment {
  std::array<std::uint8_t, 8> reassembly_id{};
  std::uint16_t seq = 0;
  std::uint16_t count = 0;
  Bytes payload;

  auto operator<=>(const InterestFragment&) const = default;
};

/// Named, signed unit of data. The signature covers the signable region:
/// the canonical encoding of name ‖ key_locator ‖ payload.
struct ContentObject {
  Name name;
  KeyLocator key_locator;
  Bytes payload;
  Signature signature;

  auto operator<=>(const ContentObject&) const = default;
};

/// Carried once, by the fragment holding the final byte of the signable
/// region (the hostage fragment).
struct Trailer {
  KeyLocator key_locator;
  Signature signature;

  auto operator<=>(const Trailer&) const = default;
};

/// Block-aligned slice of a content object's signable region plus the
/// chained hash state at its offset.
struct ContentFragment {
  Name name;
  std::uint64_t content_object_size = 0; // signable-region length N_s
  HashState internal_state;              // hash state at payload_offset
  std::uint64_t payload_offset = 0;
  Bytes payload;
  Digest content_digest;
  std::optional<Trailer> trailer; // present iff is_last()

  bool is_last() const {
    return payload_offset + payload.size() == content_object_size;
  }

  auto operator<=>(const ContentFragment&) const = default;
};

using Packet = std::variant<Interest, InterestFragment, ContentFragment>;

// Canonical encoders. Deterministic; throw InvariantViolation when the
// in-memory value breaks a structural invariant.
Bytes encode_interest(const Interest& interest);
Bytes encode_interest_fragment(const InterestFragment& fragment);
Bytes encode_content_object(const ContentObject& object);
Bytes encode_content_fragment(const ContentFragment& fragment);
Bytes encode_packet(const Packet& packet);

// Decoders. Reject trailing garbage, unknown types, and invariant
// violations; throw Truncated / UnknownType / InvariantViolation.
Interest decode_interest(ByteView data);
InterestFragment decode_interest_fragment(ByteView data);
ContentObject decode_content_object(ByteView data);
ContentFragment decode_content_fragment(ByteView data);
Packet decode_packet(ByteView data);

std::size_t encoded_size(const Packet& packet);

/// The bytes the producer hashed and signed: canonical encoding of
/// name ‖ key_locator ‖ payload (signature excluded).
Bytes signable_region(const ContentObject& object);

/// Inverse of signable_region: re-parse reassembled region bytes and
/// attach a signature carried out of band (a fragment trailer).
ContentObject content_object_from_signable_region(ByteView region,
                                                  const Signature& signature);

Digest content_digest(const ContentObject& object);

/// Build and sign a content object in one step.
ContentObject make_content_object(Name name, KeyLocator locator, Bytes payload,
                                  const KeyPair& keypair);

/// Exact encoded size of a content fragment minus its payload bytes, for
/// a given name and trailer. Independent of payload contents.
std::size_t content_fragment_header_size(const Name& name,
                                         const std::optional<Trailer>& trailer);

inline std::size_t header_size(const ContentFragment& fragment) {
  return content_fragment_header_size(fragment.name, fragment.trailer);
}

} // namespace figoa
