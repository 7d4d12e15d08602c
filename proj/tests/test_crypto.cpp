#include <doctest.h>

#include "figoa/crypto.hpp"
#include "figoa/errors.hpp"
#include "figoa/hashstate.hpp"

using namespace figoa;

namespace {
Digest digest_of(const char* s) {
  Bytes b(s, s + std::char_traits<char>::length(s));
  return sha256(b);
}
} // namespace

TEST_CASE("seeded keygen is deterministic") {
  for (auto scheme : {SignatureScheme::test, SignatureScheme::ed25519}) {
    KeyPair a = generate_keypair(scheme, 42);
    KeyPair b = generate_keypair(scheme, 42);
    KeyPair c = generate_keypair(scheme, 43);
    CHECK(a.public_key == b.public_key);
    CHECK(a.private_key == b.private_key);
    CHECK(a.public_key != c.public_key);
    CHECK(a.public_key.size() == public_key_length(a.scheme_id));
  }
}

TEST_CASE("sign and verify both schemes") {
  Digest d = digest_of("payload digest");
  for (auto scheme : {SignatureScheme::test, SignatureScheme::ed25519}) {
    KeyPair kp = generate_keypair(scheme, 1);
    Signature sig = sign_digest(kp, d);
    CHECK(sig.sig_bytes.size() == signature_length(kp.scheme_id));
    CHECK(verify_digest(kp.public_key, d, sig));

    // wrong digest
    CHECK_FALSE(verify_digest(kp.public_key, digest_of("other"), sig));

    // tampered signature
    Signature bad = sig;
    bad.sig_bytes[0] ^= 1;
    CHECK_FALSE(verify_digest(kp.public_key, d, bad));

    // wrong key
    KeyPair other = generate_keypair(scheme, 2);
    CHECK_FALSE(verify_digest(other.public_key, d, sig));
  }
}

TEST_CASE("public key recoverable from private") {
  for (auto scheme : {SignatureScheme::test, SignatureScheme::ed25519}) {
    KeyPair kp = generate_keypair(scheme, 5);
    CHECK(public_key_from_private(kp.scheme_id, kp.private_key) ==
          kp.public_key);
  }
}

TEST_CASE("unknown scheme throws") {
  CHECK_THROWS_AS(signature_length(9), UnsupportedScheme);
  CHECK_THROWS_AS(public_key_length(9), UnsupportedScheme);
  CHECK_THROWS_AS(public_key_from_private(9, Bytes(32, 0)), UnsupportedScheme);
  Signature sig{9, Bytes(64, 0)};
  CHECK_THROWS_AS(verify_digest(Bytes(32, 0), digest_of("x"), sig),
                  UnsupportedScheme);
}

TEST_CASE("key registry and locator resolution") {
  KeyPair kp = generate_keypair(SignatureScheme::ed25519, 3);
  KeyRegistry reg;
  Name key_name = Name::from_uri("/keys/alice");
  reg.add(key_name, kp.public_key);

  CHECK(reg.find(key_name) == kp.public_key);
  CHECK_FALSE(reg.find(Name::from_uri("/keys/bob")).has_value());

  KeyLocator embedded = KeyLocator::embedded(kp.public_key);
  KeyLocator named = KeyLocator::named(key_name);
  CHECK(resolve_key(&reg, embedded) == kp.public_key);
  CHECK(resolve_key(nullptr, embedded) == kp.public_key);
  CHECK(resolve_key(&reg, named) == kp.public_key);
  CHECK_FALSE(resolve_key(nullptr, named).has_value());
  CHECK_FALSE(
      resolve_key(&reg, KeyLocator::named(Name::from_uri("/keys/bob")))
          .has_value());
}
