#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>

#include "figoa/bytes.hpp"
#include "figoa/hashstate.hpp"
#include "figoa/name.hpp"

namespace figoa {

/// Scheme 0 is a deterministic keyed test construction (signature =
/// SHA-256(private ‖ digest), public key doubles as the shared verification
/// secret); scheme 1 is Ed25519.
enum class SignatureScheme : std::uint8_t {
  test = 0,
  ed25519 = 1,
};

struct Signature {
  std::uint8_t scheme_id = 0;
  Bytes sig_bytes;

  auto operator<=>(const Signature&) const = default;
};

/// Reference to the public key needed to verify a content signature:
/// either the key itself or the name it is published under. Routers never
/// fetch keys over the network; a key-name resolves against a local
/// registry or not at all.
struct KeyLocator {
  enum class Mode : std::uint8_t { embedded_key = 0, key_name = 1 };

  Mode mode = Mode::embedded_key;
  Bytes key_bytes; // embedded_key mode only
  Name key_name;   // key_name mode only

  static KeyLocator embedded(Bytes key);
  static KeyLocator named(Name name);

  auto operator<=>(const KeyLocator&) const = default;
};

struct KeyPair {
  std::uint8_t scheme_id = 0;
  Bytes public_key;
  Bytes private_key;
};

/// Expected signature length for a scheme. Throws UnsupportedScheme.
std::size_t signature_length(std::uint8_t scheme_id);
std::size_t public_key_length(std::uint8_t scheme_id);

/// Deterministic when a seed is given, otherwise freshly random.
KeyPair generate_keypair(SignatureScheme scheme,
                         std::optional<std::uint64_t> seed = std::nullopt);

Signature sign_digest(const KeyPair& keypair, const Digest& digest);

/// Recover the public half from stored private key material.
Bytes public_key_from_private(std::uint8_t scheme_id, ByteView private_key);

/// True iff `signature` is valid for `digest` under `public_key`. Returns
/// false (never throws) on any well-formed mismatch; throws
/// UnsupportedScheme only for an unknown scheme id.
bool verify_digest(ByteView public_key, const Digest& digest,
                   const Signature& signature);

/// Local name → public key map. Immutable once handed to a verifier.
class KeyRegistry {
public:
  void add(const Name& name, Bytes public_key);
  std::optional<Bytes> find(const Name& name) const;

private:
  std::map<Name, Bytes> keys_;
};

/// Embedded locators resolve to their own bytes; key-name locators resolve
/// through the registry (which may be null). Absence is a value, not an error.
std::optional<Bytes> resolve_key(const KeyRegistry* registry,
                                 const KeyLocator& locator);

} // namespace figoa
