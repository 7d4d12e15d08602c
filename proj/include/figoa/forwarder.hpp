#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "figoa/fragmenter.hpp"
#include "figoa/verifier.hpp"

namespace figoa {

using FaceId = int;
/// The local application attachment point: interests enter here and
/// accepted objects are delivered here. It has no MTU.
inline constexpr FaceId kAppFace = -1;

enum class NodeMode { cut_through, hop_by_hop_reassembly };

struct NodeConfig {
  NodeMode mode = NodeMode::cut_through;
  /// Reject content whose signature cannot be verified (consumers).
  /// Routers leave this off and still verify whenever a key resolves.
  bool verify_signatures = false;
  std::size_t cs_capacity = 64;
  /// Lifetime of verifier buffers, PIT entries, and interest-reassembly
  /// state, in simulated seconds.
  double buffer_timeout = 4.0;
};

struct PitEntry {
  struct Arrival {
    std::optional<std::uint32_t> mu_mtu; // stamped downstream µMTU
  };
  Name name;
  std::map<FaceId, Arrival> arrival_faces;
  double created_at = 0.0;
  double expiry = 0.0;
};

struct FibEntry {
  Name name_prefix;
  std::vector<FaceId> faces;
};

class ContentStore {
public:
  explicit ContentStore(std::size_t capacity) : capacity_(capacity) {}

  void insert(const ContentObject& object);
  /// Most recently used object under the name, bumping it. Null on miss.
  const ContentObject* find(const Name& name);
  std::size_t size() const { return entries_.size(); }

private:
  std::size_t capacity_;
  std::list<std::pair<ContentKey, ContentObject>> entries_; // front = MRU
  std::map<ContentKey, std::list<std::pair<ContentKey, ContentObject>>::iterator>
      index_;
};

struct TraceEvent {
  double time = 0.0;
  std::string node;
  std::string kind; // send receive forward accept reject cache_hit refragment
  std::string name;
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
  FaceId face = kAppFace;
};

/// Split an interest encoding into MTU-sized pieces. The receiver keys
/// reassembly on (arrival face, reassembly_id).
std::vector<InterestFragment> fragment_interest(const Interest& interest,
                                                std::size_t mtu);
/// Merge fragments back; throws Incomplete on gaps, InvariantViolation
/// on inconsistent ids or counts.
Interest reassemble_interest(const std::vector<InterestFragment>& fragments);

/// One NDN node: a single-threaded state machine mapping an input event
/// to a list of sends.
class Node {
public:
  struct Send {
    FaceId face;
    Packet packet;
  };
  struct Delivery {
    ContentObject object;
    double time;
  };

  Node(std::string id, NodeConfig config, const KeyRegistry* keys = nullptr);

  const std::string& id() const { return id_; }
  const NodeConfig& config() const { return config_; }

  /// Register a face and the MTU this node may send on it.
  void add_face(FaceId face, std::uint32_t mtu);
  void add_route(const Name& prefix, FaceId face);
  /// Publish: interests for exactly this name are satisfied locally.
  void produce(ContentObject object);

  std::vector<Send> on_packet(const Packet& packet, FaceId in_face, double now);
  /// Decode-and-dispatch used by the simulator; undecodable input is
  /// dropped silently.
  std::vector<Send> on_wire(ByteView data, FaceId in_face, double now);
  /// Issue an interest from the local application.
  std::vector<Send> express_interest(const Interest& interest, double now);
  /// Lazy timers: verifier buffers, PIT entries, interest reassembly.
  void expire(double now);

  std::vector<Delivery>& deliveries() { return deliveries_; }
  std::vector<std::string>& rejections() { return rejections_; }

  const std::map<Name, PitEntry>& pit() const { return pit_; }
  const FragmentVerifier& verifier() const { return verifier_; }
  ContentStore& content_store() { return cs_; }
  std::uint32_t face_mtu(FaceId face) const;

  /// Observer for node-level events (forward/accept/reject/...).
  std::function<void(const TraceEvent&)> trace;

private:
  std::vector<Send> on_interest(const Interest& interest, FaceId in_face,
                                double now);
  std::vector<Send> on_interest_fragment(const InterestFragment& fragment,
                                         FaceId in_face, double now);
  std::vector<Send> on_content_fragment(const ContentFragment& fragment,
                                        FaceId in_face, double now);
  std::vector<Send> respond_with_object(const ContentObject& object,
                                        FaceId face,
                                        std::optional<std::uint32_t> mu_mtu,
                                        double now);
  void send_fragment(const ContentFragment& fragment, FaceId face, double now,
                     std::vector<Send>& sends);
  const FibEntry* longest_prefix(const Name& name) const;
  void emit(double now, const char* kind, const Name& name,
            std::uint64_t offset, std::uint64_t size, FaceId face);

  std::string id_;
  NodeConfig config_;
  std::map<FaceId, std::uint32_t> faces_;
  std::vector<FibEntry> fib_;
  std::map<Name, PitEntry> pit_;
  ContentStore cs_;
  std::map<Name, ContentObject> productions_;
  FragmentVerifier verifier_;

  struct PartialInterest {
    std::uint16_t count = 0;
    std::map<std::uint16_t, Bytes> pieces;
    double created_at = 0.0;
  };
  std::map<std::pair<FaceId, std::array<std::uint8_t, 8>>, PartialInterest>
      partials_;

  std::vector<Delivery> deliveries_;
  std::vector<std::string> rejections_;
};

} // namespace figoa
