#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "figoa/crypto.hpp"
#include "figoa/wire.hpp"

namespace figoa {

/// Contents are tracked by (name, digest): the digest pins one specific
/// object even when several share a name.
struct ContentKey {
  Name name;
  Digest digest;

  auto operator<=>(const ContentKey&) const = default;
};

enum class StateOrigin : std::uint8_t {
  claimed,  // carried in a received fragment
  computed, // derived by compressing a predecessor's payload
  matched,  // claimed and computed values compared equal
};

/// Per-content reassembly and verification state.
struct PendingContentBuffer {
  enum class Status { accumulating, rejected };

  struct KnownState {
    HashState state;
    StateOrigin origin;
  };

  ContentKey key;
  std::uint64_t total = 0; // signable-region length N_s
  std::map<std::uint64_t, Bytes> segments; // offset -> payload
  std::map<std::uint64_t, KnownState> known_states;
  std::optional<ContentFragment> hostage;
  double created_at = 0.0;
  Status status = Status::accumulating;
  std::uint64_t received_bytes = 0;

  bool complete() const {
    return received_bytes == total && hostage.has_value();
  }
};

struct Forward {
  ContentFragment fragment;
};
struct HoldHostage {};
struct AcceptComplete {
  ContentObject object;
  /// Fragments to send now that verification passed: the triggering
  /// fragment when it is not the hostage, then the hostage itself.
  std::vector<ContentFragment> release;
};
struct Reject {
  std::string reason;
};
struct DuplicateIgnored {};

using FragmentDecision =
    std::variant<Forward, HoldHostage, AcceptComplete, Reject, DuplicateIgnored>;

struct VerifierOptions {
  /// Reject at completion when no verification key resolves. Consumers
  /// set this; routers accept on digest match alone.
  bool require_signature = false;
  const KeyRegistry* keys = nullptr;
  double buffer_timeout = 4.0;
};

/// Rebuild the content object from a completed buffer. The signable
/// region is the concatenated segments; the signature comes from the
/// hostage trailer. Throws Incomplete when bytes or trailer are missing,
/// InvariantViolation when the decoded region contradicts the fragments.
ContentObject assemble(const PendingContentBuffer& buffer);

/// Out-of-order incremental verifier with hostage semantics. Decisions
/// are returned, never executed; the caller performs all sends.
class FragmentVerifier {
public:
  explicit FragmentVerifier(VerifierOptions options = {});

  FragmentDecision on_fragment(const ContentFragment& fragment, double now);

  /// Drop buffers older than the timeout; returns their keys so the
  /// caller can flush matching PIT entries.
  std::vector<ContentKey> expire_buffers(double now, double timeout);
  std::vector<ContentKey> expire_buffers(double now);

  const PendingContentBuffer* find_buffer(const ContentKey& key) const;

  /// Keys of live (non-rejected) buffers whose content carries a name.
  std::vector<ContentKey> buffer_keys(const Name& name) const;

  /// Reconstructed non-hostage fragments held for a content, offset
  /// order, arrival form. Used to catch a late-collapsed interest up.
  std::vector<ContentFragment> buffered_fragments(const ContentKey& key) const;

  const VerifierOptions& options() const { return options_; }

private:
  Reject reject_buffer(PendingContentBuffer& buffer, std::string reason);
  FragmentDecision try_complete(PendingContentBuffer& buffer,
                                const ContentFragment& fragment);

  VerifierOptions options_;
  std::map<ContentKey, PendingContentBuffer> buffers_;
};

} // namespace figoa
