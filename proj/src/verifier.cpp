#include "figoa/verifier.hpp"

#include <utility>

#include "figoa/errors.hpp"

namespace figoa {
namespace {

std::uint64_t align_down(std::uint64_t n) {
  return n - n % kHashBlockSize;
}

bool same_fragment(const ContentFragment& a, const ContentFragment& b) {
  return a.internal_state == b.internal_state && a.payload == b.payload &&
         a.trailer == b.trailer && a.content_object_size == b.content_object_size;
}

} // namespace

ContentObject assemble(const PendingContentBuffer& buffer) {
  if (!buffer.complete())
    throw Incomplete("content " + buffer.key.name.to_uri() + ": have " +
                     std::to_string(buffer.received_bytes) + " of " +
                     std::to_string(buffer.total) + " bytes" +
                     (buffer.hostage ? "" : ", trailer missing"));
  Bytes region;
  region.reserve(buffer.total);
  for (const auto& [offset, payload] : buffer.segments) {
    if (offset != region.size())
      throw Incomplete("gap at offset " + std::to_string(region.size()));
    append(region, payload);
  }

  const Trailer& trailer = *buffer.hostage->trailer;
  ContentObject object =
      content_object_from_signable_region(region, trailer.signature);
  // The re-parsed region is the signed truth; the unsigned copies the
  // fragments and trailer carried must agree with it.
  if (object.name != buffer.key.name)
    throw InvariantViolation("assembled name does not match fragment name");
  if (object.key_locator != trailer.key_locator)
    throw InvariantViolation(
        "trailer key locator does not match the signed one");
  return object;
}

FragmentVerifier::FragmentVerifier(VerifierOptions options)
    : options_(options) {}

Reject FragmentVerifier::reject_buffer(PendingContentBuffer& buffer,
                                       std::string reason) {
  buffer.status = PendingContentBuffer::Status::rejected;
  buffer.segments.clear();
  buffer.known_states.clear();
  buffer.hostage.reset();
  buffer.received_bytes = 0;
  return Reject{std::move(reason)};
}

FragmentDecision FragmentVerifier::try_complete(PendingContentBuffer& buffer,
                                                const ContentFragment& fragment) {
  const ContentFragment& hostage = *buffer.hostage;

  // The chain is fully matched up to the hostage's offset; finish the
  // digest from there instead of rehashing the whole object.
  auto it = buffer.known_states.find(hostage.payload_offset);
  HashState state = it->second.state;
  std::uint64_t aligned = align_down(hostage.payload.size());
  if (aligned > 0)
    state = compress(state, ByteView(hostage.payload).subspan(0, aligned));
  ByteView tail = ByteView(hostage.payload).subspan(aligned);
  Digest digest = finalize(state, tail, buffer.total);
  if (digest != buffer.key.digest)
    return reject_buffer(buffer, "reassembled digest does not match");

  ContentObject object;
  try {
    object = assemble(buffer);
  } catch (const Error& e) {
    return reject_buffer(buffer, std::string("assembly failed: ") + e.what());
  }

  auto pub = resolve_key(options_.keys, object.key_locator);
  if (pub) {
    if (!verify_digest(*pub, digest, object.signature))
      return reject_buffer(buffer, "signature verification failed");
  } else if (options_.require_signature) {
    return reject_buffer(buffer, "no verification key resolves");
  }

  AcceptComplete accept;
  accept.object = std::move(object);
  if (!fragment.is_last())
    accept.release.push_back(fragment);
  accept.release.push_back(*buffer.hostage);
  ContentKey content_key = buffer.key;
  buffers_.erase(content_key);
  return accept;
}

FragmentDecision FragmentVerifier::on_fragment(const ContentFragment& fragment,
                                               double now) {
  ContentKey key{fragment.name, fragment.content_digest};
  auto [it, created] = buffers_.try_emplace(key);
  PendingContentBuffer& buffer = it->second;
  if (created) {
    buffer.key = key;
    buffer.total = fragment.content_object_size;
    buffer.created_at = now;
    buffer.known_states.emplace(
        0, PendingContentBuffer::KnownState{new_state(), StateOrigin::computed});
  }

  if (buffer.status == PendingContentBuffer::Status::rejected)
    return Reject{"content previously rejected"};

  if (fragment.content_object_size != buffer.total)
    return reject_buffer(buffer, "content size disagrees across fragments");

  std::uint64_t v = fragment.payload_offset;
  std::uint64_t w = v + fragment.payload.size();

  auto seg = buffer.segments.find(v);
  if (seg != buffer.segments.end()) {
    bool identical = seg->second == fragment.payload;
    if (identical && fragment.is_last())
      identical = buffer.hostage && same_fragment(*buffer.hostage, fragment);
    if (identical) {
      auto ks = buffer.known_states.find(v);
      identical = ks != buffer.known_states.end() &&
                  ks->second.state == fragment.internal_state;
    }
    if (identical)
      return DuplicateIgnored{};
    return reject_buffer(buffer, "conflicting duplicate at offset " +
                                     std::to_string(v));
  }
  auto after = buffer.segments.lower_bound(v);
  if (after != buffer.segments.end() && after->first < w)
    return reject_buffer(buffer, "overlapping fragment ranges");
  if (after != buffer.segments.begin()) {
    auto before = std::prev(after);
    if (before->first + before->second.size() > v)
      return reject_buffer(buffer, "overlapping fragment ranges");
  }

  // Both the claimed state at v and the state computed over the
  // block-aligned payload are checked against whatever this buffer
  // already knows; storing the survivors covers all arrival orders.
  auto reconcile = [&](std::uint64_t offset, const HashState& state,
                       StateOrigin origin) {
    auto [ks, fresh] = buffer.known_states.try_emplace(
        offset, PendingContentBuffer::KnownState{state, origin});
    if (fresh)
      return true;
    if (ks->second.state != state)
      return false;
    ks->second.origin = StateOrigin::matched;
    return true;
  };

  if (!reconcile(v, fragment.internal_state, StateOrigin::claimed))
    return reject_buffer(buffer, "internal state mismatch at offset " +
                                     std::to_string(v));
  if (!fragment.is_last()) {
    HashState end_state = fragment.internal_state;
    end_state = compress(end_state, fragment.payload);
    if (!reconcile(w, end_state, StateOrigin::computed))
      return reject_buffer(buffer, "internal state mismatch at offset " +
                                       std::to_string(w));
  }

  buffer.segments.emplace(v, fragment.payload);
  buffer.received_bytes += fragment.payload.size();
  if (fragment.is_last())
    buffer.hostage = fragment;

  if (buffer.complete())
    return try_complete(buffer, fragment);
  if (fragment.is_last())
    return HoldHostage{};
  return Forward{fragment};
}

std::vector<ContentKey> FragmentVerifier::expire_buffers(double now,
                                                         double timeout) {
  std::vector<ContentKey> flushed;
  for (auto it = buffers_.begin(); it != buffers_.end();) {
    if (now - it->second.created_at > timeout) {
      flushed.push_back(it->first);
      it = buffers_.erase(it);
    } else {
      ++it;
    }
  }
  return flushed;
}

std::vector<ContentKey> FragmentVerifier::expire_buffers(double now) {
  return expire_buffers(now, options_.buffer_timeout);
}

const PendingContentBuffer*
FragmentVerifier::find_buffer(const ContentKey& key) const {
  auto it = buffers_.find(key);
  return it == buffers_.end() ? nullptr : &it->second;
}

std::vector<ContentKey> FragmentVerifier::buffer_keys(const Name& name) const {
  std::vector<ContentKey> keys;
  for (const auto& [key, buffer] : buffers_) {
    if (key.name == name &&
        buffer.status == PendingContentBuffer::Status::accumulating)
      keys.push_back(key);
  }
  return keys;
}

std::vector<ContentFragment>
FragmentVerifier::buffered_fragments(const ContentKey& key) const {
  std::vector<ContentFragment> out;
  const PendingContentBuffer* buffer = find_buffer(key);
  if (!buffer || buffer->status == PendingContentBuffer::Status::rejected)
    return out;
  for (const auto& [offset, payload] : buffer->segments) {
    if (buffer->hostage && buffer->hostage->payload_offset == offset)
      continue; // never hand out the hostage early
    ContentFragment f;
    f.name = buffer->key.name;
    f.content_object_size = buffer->total;
    f.internal_state = buffer->known_states.at(offset).state;
    f.payload_offset = offset;
    f.payload = payload;
    f.content_digest = buffer->key.digest;
    out.push_back(std::move(f));
  }
  return out;
}

} // namespace figoa
