#include <doctest.h>

#include <random>

#include "figoa/errors.hpp"
#include "figoa/fragmenter.hpp"
#include "figoa/wire.hpp"
#include "helpers.hpp"

using namespace figoa;

namespace {

Interest sample_interest(bool with_mu) {
  Interest i;
  i.name = Name::from_uri("/ndn/usa/cnn/frontpage/news");
  i.nonce = {1, 2, 3, 4, 5, 6, 7, 8};
  if (with_mu)
    i.mu_mtu = 1400;
  return i;
}

ContentFragment sample_fragment(bool last) {
  ContentObject object = test::make_test_object("/video/clip", 500, 77);
  auto frags = fragment_content(object, 1500);
  REQUIRE(frags.size() == 1); // 500-byte payload fits one fragment
  if (last)
    return frags[0];
  // fabricate a non-last slice by fragmenting something larger
  object = test::make_test_object("/video/clip", 4000, 77);
  frags = fragment_content(object, 1500);
  REQUIRE(frags.size() > 1);
  REQUIRE_FALSE(frags[0].is_last());
  return frags[0];
}

} // namespace

TEST_CASE("interest round trip") {
  for (bool with_mu : {false, true}) {
    Interest i = sample_interest(with_mu);
    Bytes wire = encode_interest(i);
    CHECK(decode_interest(wire) == i);
    CHECK(encode_interest(i) == wire); // deterministic
  }
}

TEST_CASE("interest fragment round trip") {
  InterestFragment f;
  f.reassembly_id = {9, 8, 7, 6, 5, 4, 3, 2};
  f.seq = 1;
  f.count = 3;
  f.payload = {0xaa, 0xbb, 0xcc};
  Bytes wire = encode_interest_fragment(f);
  CHECK(decode_interest_fragment(wire) == f);
}

TEST_CASE("content object round trip both locator modes") {
  ContentObject object = test::make_test_object("/a/b", 300, 5);
  Bytes wire = encode_content_object(object);
  CHECK(decode_content_object(wire) == object);

  KeyPair kp = generate_keypair(SignatureScheme::test, 6);
  ContentObject named = make_content_object(
      Name::from_uri("/x"), KeyLocator::named(Name::from_uri("/keys/x")),
      Bytes(100, 0x42), kp);
  CHECK(decode_content_object(encode_content_object(named)) == named);
}

TEST_CASE("content fragment round trip") {
  for (bool last : {false, true}) {
    ContentFragment f = sample_fragment(last);
    CHECK(f.is_last() == last);
    CHECK(f.trailer.has_value() == last);
    Bytes wire = encode_content_fragment(f);
    CHECK(decode_content_fragment(wire) == f);
  }
}

TEST_CASE("packet variant round trip and encoded_size") {
  std::vector<Packet> packets{sample_interest(true),
                              InterestFragment{{1, 1, 1, 1, 1, 1, 1, 1},
                                               0,
                                               1,
                                               Bytes{0x55}},
                              sample_fragment(true)};
  for (const Packet& p : packets) {
    Bytes wire = encode_packet(p);
    CHECK(encoded_size(p) == wire.size());
    CHECK(decode_packet(wire) == p);
  }
}

TEST_CASE("signable region inverts and pins the digest") {
  ContentObject object = test::make_test_object("/a/b/c", 1000, 9);
  Bytes region = signable_region(object);
  CHECK(content_digest(object) == sha256(region));
  CHECK(content_object_from_signable_region(region, object.signature) ==
        object);
}

TEST_CASE("header size is exact for every shape") {
  std::mt19937_64 rng(13);
  for (std::size_t payload : {64u, 500u, 1337u, 4096u}) {
    for (const char* uri : {"/a", "/ndn/usa/cnn/frontpage/news",
                            "/one/two/three/four/five/six/seven"}) {
      for (auto scheme : {SignatureScheme::test, SignatureScheme::ed25519}) {
        ContentObject object =
            test::make_test_object(uri, payload, rng(), scheme);
        for (const ContentFragment& f : fragment_content(object, 1500)) {
          CHECK(encode_content_fragment(f).size() ==
                header_size(f) + f.payload.size());
        }
      }
    }
  }
}

TEST_CASE("every proper prefix is rejected") {
  std::vector<Bytes> wires{encode_packet(sample_interest(true)),
                           encode_packet(sample_fragment(true))};
  for (const Bytes& wire : wires) {
    for (std::size_t len = 0; len < wire.size(); ++len) {
      CHECK_THROWS_AS(decode_packet(ByteView(wire).first(len)), Truncated);
    }
  }
}

TEST_CASE("trailing garbage rejected") {
  Bytes wire = encode_packet(sample_interest(false));
  wire.push_back(0);
  CHECK_THROWS_AS(decode_packet(wire), Error);
}

TEST_CASE("unknown outer type rejected") {
  Bytes wire = encode_packet(sample_interest(false));
  wire[0] = 0x7f;
  CHECK_THROWS_AS(decode_packet(wire), UnknownType);
}

TEST_CASE("structural invariants enforced on encode") {
  ContentFragment good = sample_fragment(true);

  ContentFragment f = good;
  f.payload_offset = 10; // not block aligned
  f.internal_state.bytes_processed = 10;
  CHECK_THROWS_AS(encode_content_fragment(f), InvariantViolation);

  f = good;
  f.internal_state.bytes_processed += 64; // state disagrees with offset
  CHECK_THROWS_AS(encode_content_fragment(f), InvariantViolation);

  f = good;
  f.trailer.reset(); // last fragment must carry the trailer
  CHECK_THROWS_AS(encode_content_fragment(f), InvariantViolation);

  f = sample_fragment(false);
  f.trailer = good.trailer; // non-last fragment must not
  CHECK_THROWS_AS(encode_content_fragment(f), InvariantViolation);

  f = sample_fragment(false);
  f.payload.pop_back(); // non-last payload must stay block aligned
  CHECK_THROWS_AS(encode_content_fragment(f), InvariantViolation);

  f = good;
  f.payload.clear(); // empty payload never allowed
  CHECK_THROWS_AS(encode_content_fragment(f), InvariantViolation);

  f = good;
  f.content_object_size = f.payload_offset + f.payload.size() - 1;
  CHECK_THROWS_AS(encode_content_fragment(f), InvariantViolation);
}

TEST_CASE("decode enforces the same invariants") {
  // corrupt the encoded offset field so offset and state disagree
  ContentObject object = test::make_test_object("/v", 4000, 3);
  auto frags = fragment_content(object, 1500);
  REQUIRE(frags.size() > 1);
  ContentFragment second = frags[1];
  REQUIRE(second.payload_offset > 0);
  Bytes wire = encode_content_fragment(second);
  Bytes good = wire;

  // find the 8-byte big-endian offset value and zero it
  Bytes needle;
  put_u64(needle, second.payload_offset);
  auto it = std::search(wire.begin(), wire.end(), needle.begin(), needle.end());
  REQUIRE(it != wire.end());
  std::fill(it, it + 8, 0);
  CHECK_THROWS_AS(decode_content_fragment(wire), InvariantViolation);
  CHECK(decode_content_fragment(good) == second); // control
}

TEST_CASE("oversized names rejected") {
  Interest i = sample_interest(false);
  i.name.components.assign(1, std::string(9000, 'x'));
  CHECK_THROWS_AS(encode_interest(i), InvariantViolation);
}

TEST_CASE("interest mu below viable minimum rejected") {
  Interest i = sample_interest(false);
  i.mu_mtu = kMinViableMtu - 1;
  CHECK_THROWS_AS(encode_interest(i), InvariantViolation);
}
