#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "figoa/crypto.hpp"
#include "figoa/fragmenter.hpp"
#include "figoa/verifier.hpp"
#include "figoa/wire.hpp"

namespace figoa::test {

inline Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n);
  std::uniform_int_distribution<int> dist(0, 255);
  for (auto& b : out)
    b = static_cast<std::uint8_t>(dist(rng));
  return out;
}

inline ContentObject make_test_object(const std::string& uri,
                                      std::size_t payload_size,
                                      std::uint64_t seed,
                                      SignatureScheme scheme =
                                          SignatureScheme::test) {
  std::mt19937_64 rng(seed);
  KeyPair kp = generate_keypair(scheme, seed);
  return make_content_object(Name::from_uri(uri),
                             KeyLocator::embedded(kp.public_key),
                             random_bytes(rng, payload_size), kp);
}

/// Feed fragments in `order` into a fresh verifier; returns the accepted
/// object or nullopt (on Reject or no completion).
inline std::optional<ContentObject> feed_all(
    const std::vector<ContentFragment>& fragments,
    const std::vector<std::size_t>& order, VerifierOptions options = {}) {
  FragmentVerifier verifier(options);
  std::optional<ContentObject> accepted;
  for (std::size_t idx : order) {
    FragmentDecision d = verifier.on_fragment(fragments[idx], 0.0);
    if (auto* a = std::get_if<AcceptComplete>(&d))
      accepted = a->object;
    else if (std::holds_alternative<Reject>(d))
      return std::nullopt;
  }
  return accepted;
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i)
    order[i] = i;
  return order;
}

inline std::vector<std::size_t> shuffled_order(std::size_t n,
                                               std::mt19937_64& rng) {
  auto order = identity_order(n);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

} // namespace figoa::test
