#include "figoa/crypto.hpp"

#include <mutex>
#include <random>

#include <sodium.h>

#include "figoa/errors.hpp"

namespace figoa {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0)
      throw Error("libsodium initialization failed");
  });
}

Bytes seed_bytes_32(std::optional<std::uint64_t> seed) {
  Bytes material;
  if (seed) {
    put_u64(material, *seed);
  } else {
    std::random_device rd;
    for (int i = 0; i < 8; ++i)
      put_u32(material, rd());
  }
  Digest d = sha256(material);
  return Bytes(d.bytes.begin(), d.bytes.end());
}

Bytes concat_and_hash(ByteView key, const Digest& digest) {
  Bytes buf;
  append(buf, key);
  append(buf, digest.bytes);
  Digest d = sha256(buf);
  return Bytes(d.bytes.begin(), d.bytes.end());
}

} // namespace

KeyLocator KeyLocator::embedded(Bytes key) {
  KeyLocator kl;
  kl.mode = Mode::embedded_key;
  kl.key_bytes = std::move(key);
  return kl;
}

KeyLocator KeyLocator::named(Name name) {
  KeyLocator kl;
  kl.mode = Mode::key_name;
  kl.key_name = std::move(name);
  return kl;
}

std::size_t signature_length(std::uint8_t scheme_id) {
  switch (scheme_id) {
  case 0:
    return kDigestSize;
  case 1:
    return crypto_sign_BYTES;
  default:
    throw UnsupportedScheme("unknown signature scheme " + std::to_string(scheme_id));
  }
}

std::size_t public_key_length(std::uint8_t scheme_id) {
  switch (scheme_id) {
  case 0:
    return 32;
  case 1:
    return crypto_sign_PUBLICKEYBYTES;
  default:
    throw UnsupportedScheme("unknown signature scheme " + std::to_string(scheme_id));
  }
}

KeyPair generate_keypair(SignatureScheme scheme, std::optional<std::uint64_t> seed) {
  KeyPair kp;
  kp.scheme_id = static_cast<std::uint8_t>(scheme);
  switch (scheme) {
  case SignatureScheme::test: {
    // Symmetric construction: the "public" key is the shared secret.
    kp.private_key = seed_bytes_32(seed);
    kp.public_key = kp.private_key;
    return kp;
  }
  case SignatureScheme::ed25519: {
    ensure_sodium();
    Bytes sk(crypto_sign_SECRETKEYBYTES);
    Bytes pk(crypto_sign_PUBLICKEYBYTES);
    Bytes s = seed_bytes_32(seed);
    crypto_sign_seed_keypair(pk.data(), sk.data(), s.data());
    kp.public_key = std::move(pk);
    kp.private_key = std::move(sk);
    return kp;
  }
  }
  throw UnsupportedScheme("unknown signature scheme");
}

Signature sign_digest(const KeyPair& keypair, const Digest& digest) {
  Signature sig;
  sig.scheme_id = keypair.scheme_id;
  switch (keypair.scheme_id) {
  case 0:
    sig.sig_bytes = concat_and_hash(keypair.private_key, digest);
    return sig;
  case 1: {
    ensure_sodium();
    sig.sig_bytes.resize(crypto_sign_BYTES);
    crypto_sign_detached(sig.sig_bytes.data(), nullptr, digest.bytes.data(),
                         digest.bytes.size(), keypair.private_key.data());
    return sig;
  }
  default:
    throw UnsupportedScheme("unknown signature scheme " +
                            std::to_string(keypair.scheme_id));
  }
}

Bytes public_key_from_private(std::uint8_t scheme_id, ByteView private_key) {
  switch (scheme_id) {
  case 0:
    // Shared-secret construction: both halves are the same bytes.
    return Bytes(private_key.begin(), private_key.end());
  case 1: {
    if (private_key.size() != crypto_sign_SECRETKEYBYTES)
      throw InvariantViolation("ed25519 private key must be " +
                               std::to_string(crypto_sign_SECRETKEYBYTES) +
                               " bytes");
    // The libsodium secret key is seed || public key.
    return Bytes(private_key.end() - crypto_sign_PUBLICKEYBYTES,
                 private_key.end());
  }
  default:
    throw UnsupportedScheme("unknown signature scheme " +
                            std::to_string(scheme_id));
  }
}

bool verify_digest(ByteView public_key, const Digest& digest,
                   const Signature& signature) {
  switch (signature.scheme_id) {
  case 0: {
    if (signature.sig_bytes.size() != kDigestSize)
      return false;
    return concat_and_hash(public_key, digest) == signature.sig_bytes;
  }
  case 1: {
    ensure_sodium();
    if (public_key.size() != crypto_sign_PUBLICKEYBYTES ||
        signature.sig_bytes.size() != crypto_sign_BYTES)
      return false;
    return crypto_sign_verify_detached(signature.sig_bytes.data(),
                                       digest.bytes.data(), digest.bytes.size(),
                                       public_key.data()) == 0;
  }
  default:
    throw UnsupportedScheme("unknown signature scheme " +
                            std::to_string(signature.scheme_id));
  }
}

void KeyRegistry::add(const Name& name, Bytes public_key) {
  keys_[name] = std::move(public_key);
}

std::optional<Bytes> KeyRegistry::find(const Name& name) const {
  auto it = keys_.find(name);
  if (it == keys_.end())
    return std::nullopt;
  return it->second;
}

std::optional<Bytes> resolve_key(const KeyRegistry* registry,
                                 const KeyLocator& locator) {
  if (locator.mode == KeyLocator::Mode::embedded_key)
    return locator.key_bytes;
  if (registry == nullptr)
    return std::nullopt;
  return registry->find(locator.key_name);
}

} // namespace figoa
