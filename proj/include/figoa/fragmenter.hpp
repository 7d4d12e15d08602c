#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "figoa/wire.hpp"

namespace figoa {

struct Cut {
  std::uint64_t offset = 0;
  std::uint64_t size = 0;

  auto operator<=>(const Cut&) const = default;
};

/// Contiguous, block-aligned cuts covering a byte region. Only the final
/// cut may have a size that is not a multiple of the hash block size.
struct FragmentPlan {
  std::vector<Cut> cuts;
};

/// Greedy maximal cuts of [region_start, region_start+region_len) under a
/// uniform per-fragment payload budget of floor(ao_mtu/64)*64 bytes.
FragmentPlan plan_cuts(std::uint64_t total, std::uint64_t region_start,
                       std::uint64_t region_len, std::size_t ao_mtu);

/// Initial fragmentation of a signed content object. Every fragment
/// encodes to at most o_mtu bytes; the payload budget is computed per
/// fragment, so the trailer-carrying last fragment gets a smaller cut.
std::vector<ContentFragment> fragment_content(const ContentObject& object,
                                              std::size_t o_mtu);

/// Split an existing fragment for a smaller MTU. The first sub-fragment
/// carries the input's internal state verbatim; later ones advance it
/// over their predecessors' payloads. Identity when the input already
/// fits. Output is flat: sub-fragments are ordinary fragments.
std::vector<ContentFragment> refragment(const ContentFragment& fragment,
                                        std::size_t o_mtu);

} // namespace figoa
