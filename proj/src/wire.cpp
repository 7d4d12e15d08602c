#include "figoa/wire.hpp"

#include <cstring>
#include <limits>
#include <string>

#include "figoa/errors.hpp"

namespace figoa {
namespace {

// Type codes. One byte each; length is a 4-byte big-endian count of the
// value bytes that follow.
constexpr std::uint8_t kTInterest = 0x01;
constexpr std::uint8_t kTInterestFragment = 0x02;
constexpr std::uint8_t kTContentObject = 0x03;
constexpr std::uint8_t kTContentFragment = 0x04;

constexpr std::uint8_t kTName = 0x10;
constexpr std::uint8_t kTNameComponent = 0x11;
constexpr std::uint8_t kTNonce = 0x12;
constexpr std::uint8_t kTMuMtu = 0x13;
constexpr std::uint8_t kTReassemblyId = 0x14;
constexpr std::uint8_t kTFragSeq = 0x15;
constexpr std::uint8_t kTFragCount = 0x16;
constexpr std::uint8_t kTFragPayload = 0x17;

constexpr std::uint8_t kTKeyLocator = 0x20;
constexpr std::uint8_t kTKeyLocatorMode = 0x21;
constexpr std::uint8_t kTKeyBytes = 0x22;
constexpr std::uint8_t kTSignature = 0x24;
constexpr std::uint8_t kTSchemeId = 0x25;
constexpr std::uint8_t kTSigBytes = 0x26;

constexpr std::uint8_t kTPayload = 0x30;

constexpr std::uint8_t kTContentObjectSize = 0x40;
constexpr std::uint8_t kTInternalState = 0x41;
constexpr std::uint8_t kTPayloadOffset = 0x42;
constexpr std::uint8_t kTPayloadSize = 0x43;
constexpr std::uint8_t kTContentDigest = 0x44;
constexpr std::uint8_t kTFragData = 0x45;
constexpr std::uint8_t kTTrailer = 0x46;

constexpr std::size_t kHeaderBytes = 5; // type byte + u32 length

void put_tlv_header(Bytes& out, std::uint8_t type, std::size_t len) {
  if (len > std::numeric_limits<std::uint32_t>::max())
    throw InvariantViolation("tlv value too long");
  out.push_back(type);
  put_u32(out, static_cast<std::uint32_t>(len));
}

void put_tlv(Bytes& out, std::uint8_t type, ByteView value) {
  put_tlv_header(out, type, value.size());
  append(out, value);
}

void put_tlv_u8(Bytes& out, std::uint8_t type, std::uint8_t v) {
  put_tlv_header(out, type, 1);
  out.push_back(v);
}

void put_tlv_u16(Bytes& out, std::uint8_t type, std::uint16_t v) {
  put_tlv_header(out, type, 2);
  put_u16(out, v);
}

void put_tlv_u32(Bytes& out, std::uint8_t type, std::uint32_t v) {
  put_tlv_header(out, type, 4);
  put_u32(out, v);
}

void put_tlv_u64(Bytes& out, std::uint8_t type, std::uint64_t v) {
  put_tlv_header(out, type, 8);
  put_u64(out, v);
}

std::string hex_byte(std::uint8_t b) {
  static const char digits[] = "0123456789abcdef";
  return std::string{'0', 'x', digits[b >> 4], digits[b & 0xf]};
}

class Reader {
public:
  Reader(ByteView data, const char* context) : data_(data), context_(context) {}

  bool done() const { return pos_ == data_.size(); }

  std::size_t remaining() const { return data_.size() - pos_; }

  std::uint8_t peek_type() const {
    if (done())
      throw Truncated(std::string(context_) + ": no tlv header");
    return data_[pos_];
  }

  /// Consume the next TLV, which must have the given type.
  ByteView expect(std::uint8_t type, const char* field) {
    if (done())
      throw Truncated(std::string(context_) + ": missing " + field);
    if (data_[pos_] != type)
      throw UnknownType(std::string(context_) + ": expected " + field + " (" +
                        hex_byte(type) + "), found " + hex_byte(data_[pos_]));
    return read_value(field);
  }

  /// Consume the next TLV if present and of the given type.
  std::optional<ByteView> maybe(std::uint8_t type, const char* field) {
    if (done() || data_[pos_] != type)
      return std::nullopt;
    return read_value(field);
  }

  void finish() const {
    if (!done())
      throw InvariantViolation(std::string(context_) + ": trailing bytes");
  }

private:
  ByteView read_value(const char* field) {
    if (remaining() < kHeaderBytes)
      throw Truncated(std::string(context_) + ": truncated header for " +
                      field);
    std::size_t len = get_u32(data_.subspan(pos_ + 1));
    if (remaining() - kHeaderBytes < len)
      throw Truncated(std::string(context_) + ": truncated value for " + field);
    ByteView value = data_.subspan(pos_ + kHeaderBytes, len);
    pos_ += kHeaderBytes + len;
    return value;
  }

  ByteView data_;
  std::size_t pos_ = 0;
  const char* context_;
};

std::uint64_t fixed_u64(ByteView v, const char* ctx, const char* field) {
  if (v.size() != 8)
    throw InvariantViolation(std::string(ctx) + ": " + field +
                             " must be 8 bytes");
  return get_u64(v);
}

std::uint32_t fixed_u32(ByteView v, const char* ctx, const char* field) {
  if (v.size() != 4)
    throw InvariantViolation(std::string(ctx) + ": " + field +
                             " must be 4 bytes");
  return get_u32(v);
}

std::uint16_t fixed_u16(ByteView v, const char* ctx, const char* field) {
  if (v.size() != 2)
    throw InvariantViolation(std::string(ctx) + ": " + field +
                             " must be 2 bytes");
  return get_u16(v);
}

std::size_t name_encoded_size(const Name& name) {
  std::size_t inner = 0;
  for (const auto& c : name.components)
    inner += kHeaderBytes + c.size();
  return kHeaderBytes + inner;
}

void encode_name_into(Bytes& out, const Name& name) {
  if (name.components.empty())
    throw InvariantViolation("name: no components");
  std::size_t inner = name_encoded_size(name) - kHeaderBytes;
  if (kHeaderBytes + inner > kMaxNameEncodedSize)
    throw InvariantViolation("name: encoded size exceeds " +
                             std::to_string(kMaxNameEncodedSize));
  put_tlv_header(out, kTName, inner);
  for (const auto& c : name.components) {
    if (c.empty())
      throw InvariantViolation("name: empty component");
    put_tlv_header(out, kTNameComponent, c.size());
    out.insert(out.end(), c.begin(), c.end());
  }
}

Name decode_name_value(ByteView value, const char* ctx) {
  if (kHeaderBytes + value.size() > kMaxNameEncodedSize)
    throw InvariantViolation(std::string(ctx) +
                             ": name encoded size exceeds " +
                             std::to_string(kMaxNameEncodedSize));
  Name name;
  Reader r(value, ctx);
  while (!r.done()) {
    ByteView comp = r.expect(kTNameComponent, "name component");
    if (comp.empty())
      throw InvariantViolation(std::string(ctx) + ": empty name component");
    name.components.emplace_back(comp.begin(), comp.end());
  }
  if (name.components.empty())
    throw InvariantViolation(std::string(ctx) + ": name has no components");
  return name;
}

Name decode_name_field(Reader& r, const char* ctx) {
  return decode_name_value(r.expect(kTName, "name"), ctx);
}

std::size_t key_locator_encoded_size(const KeyLocator& kl) {
  std::size_t inner = kHeaderBytes + 1; // mode
  if (kl.mode == KeyLocator::Mode::embedded_key)
    inner += kHeaderBytes + kl.key_bytes.size();
  else
    inner += name_encoded_size(kl.key_name);
  return kHeaderBytes + inner;
}

void encode_key_locator_into(Bytes& out, const KeyLocator& kl) {
  Bytes inner;
  put_tlv_u8(inner, kTKeyLocatorMode, static_cast<std::uint8_t>(kl.mode));
  if (kl.mode == KeyLocator::Mode::embedded_key) {
    if (kl.key_bytes.empty())
      throw InvariantViolation("key_locator: empty key bytes");
    put_tlv(inner, kTKeyBytes, kl.key_bytes);
  } else {
    encode_name_into(inner, kl.key_name);
  }
  put_tlv(out, kTKeyLocator, inner);
}

KeyLocator decode_key_locator_value(ByteView value) {
  const char* ctx = "key_locator";
  Reader r(value, ctx);
  ByteView mode_v = r.expect(kTKeyLocatorMode, "mode");
  if (mode_v.size() != 1)
    throw InvariantViolation("key_locator: mode must be 1 byte");
  KeyLocator kl;
  switch (mode_v[0]) {
  case 0: {
    kl.mode = KeyLocator::Mode::embedded_key;
    ByteView key = r.expect(kTKeyBytes, "key bytes");
    if (key.empty())
      throw InvariantViolation("key_locator: empty key bytes");
    kl.key_bytes.assign(key.begin(), key.end());
    break;
  }
  case 1:
    kl.mode = KeyLocator::Mode::key_name;
    kl.key_name = decode_name_field(r, ctx);
    break;
  default:
    throw InvariantViolation("key_locator: unknown mode " +
                             hex_byte(mode_v[0]));
  }
  r.finish();
  return kl;
}

std::size_t signature_encoded_size(const Signature& sig) {
  return kHeaderBytes + (kHeaderBytes + 1) + kHeaderBytes + sig.sig_bytes.size();
}

void encode_signature_into(Bytes& out, const Signature& sig) {
  std::size_t expected;
  try {
    expected = signature_length(sig.scheme_id);
  } catch (const UnsupportedScheme&) {
    throw InvariantViolation("signature: unknown scheme " +
                             hex_byte(sig.scheme_id));
  }
  if (sig.sig_bytes.size() != expected)
    throw InvariantViolation("signature: length " +
                             std::to_string(sig.sig_bytes.size()) +
                             " does not match scheme");
  Bytes inner;
  put_tlv_u8(inner, kTSchemeId, sig.scheme_id);
  put_tlv(inner, kTSigBytes, sig.sig_bytes);
  put_tlv(out, kTSignature, inner);
}

Signature decode_signature_value(ByteView value) {
  Reader r(value, "signature");
  ByteView scheme_v = r.expect(kTSchemeId, "scheme id");
  if (scheme_v.size() != 1)
    throw InvariantViolation("signature: scheme id must be 1 byte");
  ByteView sig_v = r.expect(kTSigBytes, "signature bytes");
  r.finish();
  Signature sig;
  sig.scheme_id = scheme_v[0];
  std::size_t expected;
  try {
    expected = signature_length(sig.scheme_id);
  } catch (const UnsupportedScheme&) {
    throw InvariantViolation("signature: unknown scheme " +
                             hex_byte(sig.scheme_id));
  }
  if (sig_v.size() != expected)
    throw InvariantViolation("signature: length " +
                             std::to_string(sig_v.size()) +
                             " does not match scheme");
  sig.sig_bytes.assign(sig_v.begin(), sig_v.end());
  return sig;
}

std::size_t trailer_encoded_size(const Trailer& t) {
  return kHeaderBytes + key_locator_encoded_size(t.key_locator) +
         signature_encoded_size(t.signature);
}

void encode_trailer_into(Bytes& out, const Trailer& t) {
  Bytes inner;
  encode_key_locator_into(inner, t.key_locator);
  encode_signature_into(inner, t.signature);
  put_tlv(out, kTTrailer, inner);
}

Trailer decode_trailer_value(ByteView value) {
  Reader r(value, "trailer");
  Trailer t;
  t.key_locator = decode_key_locator_value(r.expect(kTKeyLocator, "key locator"));
  t.signature = decode_signature_value(r.expect(kTSignature, "signature"));
  r.finish();
  return t;
}

ByteView outer_value(ByteView data, std::uint8_t type, const char* ctx) {
  if (data.size() < kHeaderBytes)
    throw Truncated(std::string(ctx) + ": truncated packet header");
  if (data[0] != type)
    throw UnknownType(std::string(ctx) + ": expected type " + hex_byte(type) +
                      ", found " + hex_byte(data[0]));
  std::size_t len = get_u32(data.subspan(1));
  if (data.size() - kHeaderBytes < len)
    throw Truncated(std::string(ctx) + ": truncated packet body");
  if (data.size() - kHeaderBytes > len)
    throw InvariantViolation(std::string(ctx) + ": trailing bytes");
  return data.subspan(kHeaderBytes, len);
}

} // namespace

Bytes encode_interest(const Interest& interest) {
  Bytes inner;
  encode_name_into(inner, interest.name);
  put_tlv(inner, kTNonce, interest.nonce);
  if (interest.mu_mtu) {
    if (*interest.mu_mtu < kMinViableMtu)
      throw InvariantViolation("interest: mu_mtu below minimum viable mtu");
    put_tlv_u32(inner, kTMuMtu, *interest.mu_mtu);
  }
  Bytes out;
  put_tlv(out, kTInterest, inner);
  return out;
}

Interest decode_interest(ByteView data) {
  const char* ctx = "interest";
  Reader r(outer_value(data, kTInterest, ctx), ctx);
  Interest interest;
  interest.name = decode_name_field(r, ctx);
  ByteView nonce = r.expect(kTNonce, "nonce");
  if (nonce.size() != interest.nonce.size())
    throw InvariantViolation("interest: nonce must be 8 bytes");
  std::memcpy(interest.nonce.data(), nonce.data(), nonce.size());
  if (auto v = r.maybe(kTMuMtu, "mu_mtu")) {
    std::uint32_t mu = fixed_u32(*v, ctx, "mu_mtu");
    if (mu < kMinViableMtu)
      throw InvariantViolation("interest: mu_mtu below minimum viable mtu");
    interest.mu_mtu = mu;
  }
  r.finish();
  return interest;
}

Bytes encode_interest_fragment(const InterestFragment& fragment) {
  if (fragment.count == 0)
    throw InvariantViolation("interest_fragment: zero count");
  if (fragment.seq >= fragment.count)
    throw InvariantViolation("interest_fragment: seq out of range");
  if (fragment.payload.empty())
    throw InvariantViolation("interest_fragment: empty payload");
  Bytes inner;
  put_tlv(inner, kTReassemblyId, fragment.reassembly_id);
  put_tlv_u16(inner, kTFragSeq, fragment.seq);
  put_tlv_u16(inner, kTFragCount, fragment.count);
  put_tlv(inner, kTFragPayload, fragment.payload);
  Bytes out;
  put_tlv(out, kTInterestFragment, inner);
  return out;
}

InterestFragment decode_interest_fragment(ByteView data) {
  const char* ctx = "interest_fragment";
  Reader r(outer_value(data, kTInterestFragment, ctx), ctx);
  InterestFragment f;
  ByteView rid = r.expect(kTReassemblyId, "reassembly id");
  if (rid.size() != f.reassembly_id.size())
    throw InvariantViolation("interest_fragment: reassembly id must be 8 bytes");
  std::memcpy(f.reassembly_id.data(), rid.data(), rid.size());
  f.seq = fixed_u16(r.expect(kTFragSeq, "seq"), ctx, "seq");
  f.count = fixed_u16(r.expect(kTFragCount, "count"), ctx, "count");
  ByteView payload = r.expect(kTFragPayload, "payload");
  r.finish();
  if (f.count == 0)
    throw InvariantViolation("interest_fragment: zero count");
  if (f.seq >= f.count)
    throw InvariantViolation("interest_fragment: seq out of range");
  if (payload.empty())
    throw InvariantViolation("interest_fragment: empty payload");
  f.payload.assign(payload.begin(), payload.end());
  return f;
}

Bytes signable_region(const ContentObject& object) {
  Bytes out;
  encode_name_into(out, object.name);
  encode_key_locator_into(out, object.key_locator);
  put_tlv(out, kTPayload, object.payload);
  return out;
}

Digest content_digest(const ContentObject& object) {
  return sha256(signable_region(object));
}

Bytes encode_content_object(const ContentObject& object) {
  Bytes inner = signable_region(object);
  encode_signature_into(inner, object.signature);
  Bytes out;
  put_tlv(out, kTContentObject, inner);
  return out;
}

ContentObject decode_content_object(ByteView data) {
  const char* ctx = "content_object";
  Reader r(outer_value(data, kTContentObject, ctx), ctx);
  ContentObject object;
  object.name = decode_name_field(r, ctx);
  object.key_locator =
      decode_key_locator_value(r.expect(kTKeyLocator, "key locator"));
  ByteView payload = r.expect(kTPayload, "payload");
  object.payload.assign(payload.begin(), payload.end());
  object.signature = decode_signature_value(r.expect(kTSignature, "signature"));
  r.finish();
  return object;
}

ContentObject content_object_from_signable_region(ByteView region,
                                                  const Signature& signature) {
  Bytes inner(region.begin(), region.end());
  encode_signature_into(inner, signature);
  Bytes wire;
  put_tlv(wire, kTContentObject, inner);
  return decode_content_object(wire);
}

ContentObject make_content_object(Name name, KeyLocator locator, Bytes payload,
                                  const KeyPair& keypair) {
  ContentObject object;
  object.name = std::move(name);
  object.key_locator = std::move(locator);
  object.payload = std::move(payload);
  object.signature = {keypair.scheme_id, {}};
  object.signature.sig_bytes.resize(signature_length(keypair.scheme_id));
  object.signature = sign_digest(keypair, content_digest(object));
  return object;
}

Bytes encode_content_fragment(const ContentFragment& fragment) {
  if (fragment.payload.empty())
    throw InvariantViolation("content_fragment: empty payload");
  if (fragment.payload.size() > std::numeric_limits<std::uint32_t>::max())
    throw InvariantViolation("content_fragment: payload too long");
  if (fragment.payload_offset % kHashBlockSize != 0)
    throw InvariantViolation("content_fragment: payload_offset not block aligned");
  if (fragment.payload_offset + fragment.payload.size() >
      fragment.content_object_size)
    throw InvariantViolation("content_fragment: payload exceeds object size");
  if (!fragment.is_last() && fragment.payload.size() % kHashBlockSize != 0)
    throw InvariantViolation(
        "content_fragment: non-last payload not block aligned");
  if (fragment.internal_state.bytes_processed != fragment.payload_offset)
    throw InvariantViolation(
        "content_fragment: internal state does not match payload_offset");
  if (fragment.trailer.has_value() != fragment.is_last())
    throw InvariantViolation(
        "content_fragment: trailer must be present exactly on last fragment");

  Bytes inner;
  encode_name_into(inner, fragment.name);
  put_tlv_u64(inner, kTContentObjectSize, fragment.content_object_size);
  put_tlv(inner, kTInternalState, serialize_state(fragment.internal_state));
  put_tlv_u64(inner, kTPayloadOffset, fragment.payload_offset);
  put_tlv_u32(inner, kTPayloadSize,
              static_cast<std::uint32_t>(fragment.payload.size()));
  put_tlv(inner, kTContentDigest, fragment.content_digest.bytes);
  put_tlv(inner, kTFragData, fragment.payload);
  if (fragment.trailer)
    encode_trailer_into(inner, *fragment.trailer);
  Bytes out;
  put_tlv(out, kTContentFragment, inner);
  return out;
}

ContentFragment decode_content_fragment(ByteView data) {
  const char* ctx = "content_fragment";
  Reader r(outer_value(data, kTContentFragment, ctx), ctx);
  ContentFragment f;
  f.name = decode_name_field(r, ctx);
  f.content_object_size =
      fixed_u64(r.expect(kTContentObjectSize, "content object size"), ctx,
                "content object size");
  ByteView state_v = r.expect(kTInternalState, "internal state");
  f.internal_state = deserialize_state(state_v);
  f.payload_offset = fixed_u64(r.expect(kTPayloadOffset, "payload offset"),
                               ctx, "payload offset");
  std::uint32_t psize =
      fixed_u32(r.expect(kTPayloadSize, "payload size"), ctx, "payload size");
  ByteView digest_v = r.expect(kTContentDigest, "content digest");
  if (digest_v.size() != kDigestSize)
    throw InvariantViolation("content_fragment: digest must be 32 bytes");
  std::memcpy(f.content_digest.bytes.data(), digest_v.data(), kDigestSize);
  ByteView payload = r.expect(kTFragData, "fragment data");
  if (auto t = r.maybe(kTTrailer, "trailer"))
    f.trailer = decode_trailer_value(*t);
  r.finish();

  if (payload.size() != psize)
    throw InvariantViolation(
        "content_fragment: payload size field does not match data length");
  if (payload.empty())
    throw InvariantViolation("content_fragment: empty payload");
  if (f.payload_offset % kHashBlockSize != 0)
    throw InvariantViolation("content_fragment: payload_offset not block aligned");
  if (f.payload_offset + payload.size() > f.content_object_size)
    throw InvariantViolation("content_fragment: payload exceeds object size");
  bool last = f.payload_offset + payload.size() == f.content_object_size;
  if (!last && payload.size() % kHashBlockSize != 0)
    throw InvariantViolation(
        "content_fragment: non-last payload not block aligned");
  if (f.internal_state.bytes_processed != f.payload_offset)
    throw InvariantViolation(
        "content_fragment: internal state does not match payload_offset");
  if (f.trailer.has_value() != last)
    throw InvariantViolation(
        "content_fragment: trailer must be present exactly on last fragment");
  f.payload.assign(payload.begin(), payload.end());
  return f;
}

Bytes encode_packet(const Packet& packet) {
  return std::visit(
      [](const auto& p) -> Bytes {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Interest>)
          return encode_interest(p);
        else if constexpr (std::is_same_v<T, InterestFragment>)
          return encode_interest_fragment(p);
        else
          return encode_content_fragment(p);
      },
      packet);
}

Packet decode_packet(ByteView data) {
  if (data.empty())
    throw Truncated("packet: empty buffer");
  switch (data[0]) {
  case kTInterest:
    return decode_interest(data);
  case kTInterestFragment:
    return decode_interest_fragment(data);
  case kTContentFragment:
    return decode_content_fragment(data);
  default:
    throw UnknownType("packet: unknown top-level type " + hex_byte(data[0]));
  }
}

std::size_t encoded_size(const Packet& packet) {
  return encode_packet(packet).size();
}

std::size_t content_fragment_header_size(
    const Name& name, const std::optional<Trailer>& trailer) {
  std::size_t inner = name_encoded_size(name);
  inner += kHeaderBytes + 8;               // content object size
  inner += kHeaderBytes + kEncodedStateSize; // internal state
  inner += kHeaderBytes + 8;               // payload offset
  inner += kHeaderBytes + 4;               // payload size
  inner += kHeaderBytes + kDigestSize;     // content digest
  inner += kHeaderBytes;                   // fragment data header
  if (trailer)
    inner += trailer_encoded_size(*trailer);
  return kHeaderBytes + inner;
}

} // namespace figoa
