#include <doctest.h>
#include <openssl/evp.h>

#include <random>

#include "figoa/errors.hpp"
#include "figoa/hashstate.hpp"
#include "helpers.hpp"

using namespace figoa;

namespace {

Digest openssl_sha256(ByteView data) {
  Digest d;
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(),
             nullptr);
  REQUIRE(len == kDigestSize);
  return d;
}

} // namespace

TEST_CASE("FIPS 180-2 vectors") {
  CHECK(sha256({}).hex() ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  Bytes abc{'a', 'b', 'c'};
  CHECK(sha256(abc).hex() ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  std::string two = "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq";
  Bytes two_bytes(two.begin(), two.end());
  CHECK(sha256(two_bytes).hex() ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");

  Bytes million(1000000, 'a');
  CHECK(sha256(million).hex() ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("fresh state is the standard IV") {
  HashState s = new_state();
  CHECK(s.bytes_processed == 0);
  CHECK(s.words[0] == 0x6a09e667u);
  CHECK(s.words[1] == 0xbb67ae85u);
  CHECK(s.words[2] == 0x3c6ef372u);
  CHECK(s.words[3] == 0xa54ff53au);
  CHECK(s.words[4] == 0x510e527fu);
  CHECK(s.words[5] == 0x9b05688cu);
  CHECK(s.words[6] == 0x1f83d9abu);
  CHECK(s.words[7] == 0x5be0cd19u);
}

TEST_CASE("split computation matches one-shot oracle") {
  std::mt19937_64 rng(20260823);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t len = std::uniform_int_distribution<std::size_t>(0, 4096)(rng);
    Bytes msg = test::random_bytes(rng, len);

    HashState state = new_state();
    std::size_t pos = 0;
    std::size_t full_blocks = len / kHashBlockSize;
    while (pos / kHashBlockSize < full_blocks) {
      std::size_t left = full_blocks - pos / kHashBlockSize;
      // sometimes stop early and hand the rest to finalize
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
        break;
      std::size_t take =
          std::uniform_int_distribution<std::size_t>(1, left)(rng);
      state = compress(state, ByteView(msg).subspan(pos, take * kHashBlockSize));
      pos += take * kHashBlockSize;
    }
    Digest chained = finalize(state, ByteView(msg).subspan(pos), len);
    CHECK(chained == openssl_sha256(msg));
  }
}

TEST_CASE("compress is associative over block boundaries") {
  std::mt19937_64 rng(7);
  Bytes msg = test::random_bytes(rng, 64 * 6);
  HashState all = compress(new_state(), msg);
  HashState split = compress(compress(new_state(), ByteView(msg).first(128)),
                             ByteView(msg).subspan(128));
  CHECK(all == split);
  CHECK(all.bytes_processed == 384);
}

TEST_CASE("state serialization round trip") {
  auto encoded = serialize_state(new_state());
  CHECK(to_hex(encoded) ==
        "6a09e667bb67ae853c6ef372a54ff53a510e527f9b05688c1f83d9ab5be0cd19"
        "0000000000000000");
  CHECK(deserialize_state(encoded) == new_state());

  std::mt19937_64 rng(9);
  Bytes msg = test::random_bytes(rng, 64 * 20);
  HashState s = compress(new_state(), msg);
  CHECK(deserialize_state(serialize_state(s)) == s);
}

TEST_CASE("hash error paths") {
  Bytes block(64, 0);
  CHECK_THROWS_AS(compress(new_state(), {}), MisalignedInput);
  CHECK_THROWS_AS(compress(new_state(), ByteView(block).first(63)),
                  MisalignedInput);
  CHECK_THROWS_AS(finalize(new_state(), block, 65), LengthMismatch);
  CHECK_THROWS_AS(deserialize_state(Bytes(39, 0)), BadStateEncoding);
  CHECK_THROWS_AS(deserialize_state(Bytes(41, 0)), BadStateEncoding);

  Bytes bad_count(40, 0);
  bad_count[39] = 1; // bytes_processed = 1, not a block multiple
  CHECK_THROWS_AS(deserialize_state(bad_count), BadStateEncoding);
}

TEST_CASE("finalize accepts long tails") {
  std::mt19937_64 rng(11);
  Bytes msg = test::random_bytes(rng, 300);
  // finalize with everything in the tail, nothing pre-compressed
  CHECK(finalize(new_state(), msg, msg.size()) == openssl_sha256(msg));
}
