#include "figoa/forwarder.hpp"

#include <algorithm>
#include <limits>

#include "figoa/errors.hpp"

namespace figoa {

void ContentStore::insert(const ContentObject& object) {
  if (capacity_ == 0)
    return;
  ContentKey key{object.name, content_digest(object)};
  auto it = index_.find(key);
  if (it != index_.end()) {
    entries_.splice(entries_.begin(), entries_, it->second);
    return;
  }
  entries_.emplace_front(key, object);
  index_[key] = entries_.begin();
  if (entries_.size() > capacity_) {
    index_.erase(entries_.back().first);
    entries_.pop_back();
  }
}

const ContentObject* ContentStore::find(const Name& name) {
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->first.name == name) {
      entries_.splice(entries_.begin(), entries_, it);
      return &entries_.front().second;
    }
  }
  return nullptr;
}

namespace {

// Outer TLV, reassembly id, seq, count, and payload header.
constexpr std::size_t kInterestFragmentOverhead = 5 + 13 + 7 + 7 + 5;

} // namespace

std::vector<InterestFragment> fragment_interest(const Interest& interest,
                                                std::size_t mtu) {
  if (mtu <= kInterestFragmentOverhead)
    throw MtuTooSmall("mtu " + std::to_string(mtu) +
                      " admits no interest payload");
  Bytes encoding = encode_interest(interest);
  std::size_t chunk = mtu - kInterestFragmentOverhead;
  std::size_t count = (encoding.size() + chunk - 1) / chunk;
  if (count > std::numeric_limits<std::uint16_t>::max())
    throw InvariantViolation("interest needs too many fragments");

  Digest id = sha256(encoding);
  std::array<std::uint8_t, 8> rid{};
  std::copy_n(id.bytes.begin(), rid.size(), rid.begin());

  std::vector<InterestFragment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    InterestFragment f;
    f.reassembly_id = rid;
    f.seq = static_cast<std::uint16_t>(i);
    f.count = static_cast<std::uint16_t>(count);
    std::size_t begin = i * chunk;
    std::size_t end = std::min(begin + chunk, encoding.size());
    f.payload.assign(encoding.begin() + begin, encoding.begin() + end);
    out.push_back(std::move(f));
  }
  return out;
}

Interest reassemble_interest(const std::vector<InterestFragment>& fragments) {
  if (fragments.empty())
    throw Incomplete("no interest fragments");
  const auto& rid = fragments.front().reassembly_id;
  std::uint16_t count = fragments.front().count;
  std::map<std::uint16_t, const Bytes*> pieces;
  for (const auto& f : fragments) {
    if (f.reassembly_id != rid || f.count != count)
      throw InvariantViolation("mixed interest fragment streams");
    pieces[f.seq] = &f.payload;
  }
  if (pieces.size() != count)
    throw Incomplete("missing interest fragments");
  Bytes encoding;
  for (const auto& [seq, payload] : pieces)
    append(encoding, *payload);
  return decode_interest(encoding);
}

Node::Node(std::string id, NodeConfig config, const KeyRegistry* keys)
    : id_(std::move(id)), config_(config), cs_(config.cs_capacity),
      verifier_(VerifierOptions{config.verify_signatures, keys,
                                config.buffer_timeout}) {}

void Node::add_face(FaceId face, std::uint32_t mtu) {
  if (mtu < kMinViableMtu)
    throw MtuTooSmall("face " + std::to_string(face) + " mtu " +
                      std::to_string(mtu) + " below minimum viable " +
                      std::to_string(kMinViableMtu));
  faces_[face] = mtu;
}

void Node::add_route(const Name& prefix, FaceId face) {
  for (auto& entry : fib_) {
    if (entry.name_prefix == prefix) {
      if (std::find(entry.faces.begin(), entry.faces.end(), face) ==
          entry.faces.end())
        entry.faces.push_back(face);
      return;
    }
  }
  fib_.push_back({prefix, {face}});
}

void Node::produce(ContentObject object) {
  Name name = object.name;
  productions_.insert_or_assign(std::move(name), std::move(object));
}

std::uint32_t Node::face_mtu(FaceId face) const {
  auto it = faces_.find(face);
  if (it == faces_.end())
    throw InvariantViolation("node " + id_ + ": unknown face " +
                             std::to_string(face));
  return it->second;
}

const FibEntry* Node::longest_prefix(const Name& name) const {
  const FibEntry* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& entry : fib_) {
    if (entry.name_prefix.is_prefix_of(name) &&
        (best == nullptr || entry.name_prefix.components.size() > best_len)) {
      best = &entry;
      best_len = entry.name_prefix.components.size();
    }
  }
  return best;
}

void Node::emit(double now, const char* kind, const Name& name,
                std::uint64_t offset, std::uint64_t size, FaceId face) {
  if (trace)
    trace(TraceEvent{now, id_, kind, name.to_uri(), offset, size, face});
}

std::vector<Node::Send> Node::on_packet(const Packet& packet, FaceId in_face,
                                        double now) {
  return std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Interest>)
          return on_interest(p, in_face, now);
        else if constexpr (std::is_same_v<T, InterestFragment>)
          return on_interest_fragment(p, in_face, now);
        else
          return on_content_fragment(p, in_face, now);
      },
      packet);
}

std::vector<Node::Send> Node::on_wire(ByteView data, FaceId in_face,
                                      double now) {
  Packet packet;
  try {
    packet = decode_packet(data);
  } catch (const Error&) {
    return {};
  }
  return on_packet(packet, in_face, now);
}

std::vector<Node::Send> Node::express_interest(const Interest& interest,
                                               double now) {
  return on_interest(interest, kAppFace, now);
}

std::vector<Node::Send> Node::on_interest(const Interest& arrived,
                                          FaceId in_face, double now) {
  expire(now);
  Interest interest = arrived;
  if (in_face != kAppFace) {
    // µMTU discovery: the reverse direction of the arrival link bounds
    // whatever content will travel back over it.
    std::uint32_t reverse = face_mtu(in_face);
    interest.mu_mtu =
        std::min(interest.mu_mtu.value_or(
                     std::numeric_limits<std::uint32_t>::max()),
                 reverse);
  }

  auto pit_it = pit_.find(interest.name);
  if (pit_it != pit_.end()) {
    PitEntry& entry = pit_it->second;
    if (entry.arrival_faces.count(in_face))
      return {};
    entry.arrival_faces[in_face] = {interest.mu_mtu};
    entry.expiry = std::max(entry.expiry, now + config_.buffer_timeout);
    std::vector<Send> sends;
    // Catch the late requester up with whatever already flowed through.
    if (config_.mode == NodeMode::cut_through && in_face != kAppFace) {
      for (const ContentKey& key : verifier_.buffer_keys(interest.name))
        for (const ContentFragment& f : verifier_.buffered_fragments(key))
          send_fragment(f, in_face, now, sends);
    }
    return sends;
  }

  if (const ContentObject* cached = cs_.find(interest.name)) {
    emit(now, "cache_hit", interest.name, 0, cached->payload.size(), in_face);
    return respond_with_object(*cached, in_face, interest.mu_mtu, now);
  }

  auto prod = productions_.find(interest.name);
  if (prod != productions_.end())
    return respond_with_object(prod->second, in_face, interest.mu_mtu, now);

  const FibEntry* route = longest_prefix(interest.name);
  if (route == nullptr || route->faces.empty())
    return {}; // no route: drop without error packets

  PitEntry entry;
  entry.name = interest.name;
  entry.arrival_faces[in_face] = {interest.mu_mtu};
  entry.created_at = now;
  entry.expiry = now + config_.buffer_timeout;
  pit_.emplace(interest.name, std::move(entry));

  FaceId out = route->faces.front();
  std::vector<Send> sends;
  Bytes encoding = encode_interest(interest);
  if (encoding.size() <= face_mtu(out)) {
    sends.push_back({out, interest});
  } else {
    for (auto& f : fragment_interest(interest, face_mtu(out)))
      sends.push_back({out, std::move(f)});
  }
  return sends;
}

std::vector<Node::Send>
Node::on_interest_fragment(const InterestFragment& fragment, FaceId in_face,
                           double now) {
  expire(now);
  auto key = std::make_pair(in_face, fragment.reassembly_id);
  auto [it, created] = partials_.try_emplace(key);
  PartialInterest& partial = it->second;
  if (created) {
    partial.count = fragment.count;
    partial.created_at = now;
  } else if (partial.count != fragment.count) {
    partials_.erase(it);
    return {};
  }
  auto [piece, fresh] = partial.pieces.try_emplace(fragment.seq,
                                                   fragment.payload);
  if (!fresh && piece->second != fragment.payload) {
    partials_.erase(it);
    return {};
  }
  if (partial.pieces.size() < partial.count)
    return {};

  Bytes encoding;
  for (const auto& [seq, payload] : partial.pieces)
    append(encoding, payload);
  partials_.erase(it);
  Interest interest;
  try {
    interest = decode_interest(encoding);
  } catch (const Error&) {
    return {};
  }
  return on_interest(interest, in_face, now);
}

std::vector<Node::Send>
Node::respond_with_object(const ContentObject& object, FaceId face,
                          std::optional<std::uint32_t> mu_mtu, double now) {
  if (face == kAppFace) {
    deliveries_.push_back({object, now});
    return {};
  }
  // Pre-fragment to the discovered µMTU so no router downstream has to
  // refragment; a legacy interest falls back to the face MTU.
  std::size_t o_mtu = std::min<std::uint64_t>(
      mu_mtu.value_or(face_mtu(face)), face_mtu(face));
  std::vector<Send> sends;
  for (auto& f : fragment_content(object, o_mtu)) {
    emit(now, "forward", f.name, f.payload_offset, f.payload.size(), face);
    sends.push_back({face, std::move(f)});
  }
  return sends;
}

void Node::send_fragment(const ContentFragment& fragment, FaceId face,
                         double now, std::vector<Send>& sends) {
  if (face == kAppFace)
    return;
  std::size_t mtu = face_mtu(face);
  if (header_size(fragment) + fragment.payload.size() <= mtu) {
    emit(now, "forward", fragment.name, fragment.payload_offset,
         fragment.payload.size(), face);
    sends.push_back({face, fragment});
    return;
  }
  emit(now, "refragment", fragment.name, fragment.payload_offset,
       fragment.payload.size(), face);
  std::vector<ContentFragment> subs;
  try {
    subs = refragment(fragment, mtu);
  } catch (const Error&) {
    return; // face too narrow even for a single block; drop
  }
  for (auto& sub : subs) {
    emit(now, "forward", sub.name, sub.payload_offset, sub.payload.size(),
         face);
    sends.push_back({face, std::move(sub)});
  }
}

std::vector<Node::Send>
Node::on_content_fragment(const ContentFragment& fragment, FaceId in_face,
                          double now) {
  expire(now);
  auto pit_it = pit_.find(fragment.name);
  if (pit_it == pit_.end())
    return {}; // unsolicited
  PitEntry& entry = pit_it->second;

  FragmentDecision decision = verifier_.on_fragment(fragment, now);
  std::vector<Send> sends;
  bool cut_through = config_.mode == NodeMode::cut_through;

  if (auto* fwd = std::get_if<Forward>(&decision)) {
    if (cut_through) {
      for (const auto& [face, arrival] : entry.arrival_faces)
        if (face != in_face)
          send_fragment(fwd->fragment, face, now, sends);
    }
    return sends;
  }
  if (std::get_if<HoldHostage>(&decision) ||
      std::get_if<DuplicateIgnored>(&decision))
    return sends;
  if (auto* rej = std::get_if<Reject>(&decision)) {
    emit(now, "reject", fragment.name, fragment.payload_offset,
         fragment.payload.size(), in_face);
    if (entry.arrival_faces.count(kAppFace))
      rejections_.push_back(rej->reason);
    pit_.erase(pit_it);
    return sends;
  }

  auto& accept = std::get<AcceptComplete>(decision);
  cs_.insert(accept.object);
  emit(now, "accept", accept.object.name, 0, accept.object.payload.size(),
       in_face);
  for (const auto& [face, arrival] : entry.arrival_faces) {
    if (face == kAppFace) {
      deliveries_.push_back({accept.object, now});
      continue;
    }
    if (face == in_face)
      continue;
    if (cut_through) {
      for (const ContentFragment& f : accept.release)
        send_fragment(f, face, now, sends);
    } else {
      std::size_t o_mtu = std::min<std::uint64_t>(
          arrival.mu_mtu.value_or(face_mtu(face)), face_mtu(face));
      try {
        for (auto& f : fragment_content(accept.object, o_mtu)) {
          emit(now, "forward", f.name, f.payload_offset, f.payload.size(),
               face);
          sends.push_back({face, std::move(f)});
        }
      } catch (const Error&) {
        // face narrower than a single block: nothing we can send
      }
    }
  }
  pit_.erase(pit_it);
  return sends;
}

void Node::expire(double now) {
  for (const ContentKey& key : verifier_.expire_buffers(now))
    pit_.erase(key.name);
  for (auto it = pit_.begin(); it != pit_.end();) {
    if (now > it->second.expiry)
      it = pit_.erase(it);
    else
      ++it;
  }
  for (auto it = partials_.begin(); it != partials_.end();) {
    if (now - it->second.created_at > config_.buffer_timeout)
      it = partials_.erase(it);
    else
      ++it;
  }
}

} // namespace figoa
