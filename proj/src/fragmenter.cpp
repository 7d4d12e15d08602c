#include "figoa/fragmenter.hpp"

#include <string>

#include "figoa/errors.hpp"

namespace figoa {
namespace {

std::uint64_t align_down(std::uint64_t n) {
  return n - n % kHashBlockSize;
}

/// Cut [start, start+len) greedily. Non-final cuts take the largest
/// block-aligned bite within budget_plain; the final cut must fit
/// budget_final (smaller when a trailer rides along).
std::vector<Cut> cut_region(std::uint64_t start, std::uint64_t len,
                            std::uint64_t budget_plain,
                            std::uint64_t budget_final) {
  std::vector<Cut> cuts;
  std::uint64_t v = start;
  std::uint64_t remaining = len;
  while (true) {
    if (remaining <= budget_final) {
      cuts.push_back({v, remaining});
      break;
    }
    std::uint64_t cut = std::min(budget_plain, align_down(remaining - 1));
    cuts.push_back({v, cut});
    v += cut;
    remaining -= cut;
  }
  return cuts;
}

struct Budgets {
  std::uint64_t plain;
  std::uint64_t final_cut;
};

Budgets budgets_for(const Name& name, const std::optional<Trailer>& trailer,
                    bool region_ends_object, std::size_t o_mtu) {
  std::size_t hs_plain = content_fragment_header_size(name, std::nullopt);
  if (o_mtu < hs_plain + kHashBlockSize)
    throw MtuTooSmall("mtu " + std::to_string(o_mtu) + " below header (" +
                      std::to_string(hs_plain) + ") + one block");
  std::uint64_t plain = align_down(o_mtu - hs_plain);
  std::uint64_t final_cut = plain;
  if (region_ends_object) {
    std::size_t hs_last = content_fragment_header_size(name, trailer);
    if (o_mtu < hs_last + kHashBlockSize)
      throw MtuTooSmall("mtu " + std::to_string(o_mtu) +
                        " below trailer header (" + std::to_string(hs_last) +
                        ") + one block");
    final_cut = o_mtu - hs_last;
  }
  return {plain, final_cut};
}

} // namespace

FragmentPlan plan_cuts(std::uint64_t total, std::uint64_t region_start,
                       std::uint64_t region_len, std::size_t ao_mtu) {
  if (ao_mtu < kHashBlockSize)
    throw MtuTooSmall("ao_mtu " + std::to_string(ao_mtu) +
                      " below one hash block");
  if (region_start % kHashBlockSize != 0)
    throw MisalignedInput("region start not block aligned");
  if (region_len == 0 || region_start + region_len > total)
    throw InvariantViolation("region outside content bounds");
  std::uint64_t budget = align_down(ao_mtu);
  FragmentPlan plan;
  plan.cuts = cut_region(region_start, region_len, budget, budget);
  return plan;
}

std::vector<ContentFragment> fragment_content(const ContentObject& object,
                                              std::size_t o_mtu) {
  Bytes region = signable_region(object);
  Trailer trailer{object.key_locator, object.signature};
  Digest digest = sha256(region);
  Budgets budgets = budgets_for(object.name, trailer, true, o_mtu);

  std::vector<Cut> cuts =
      cut_region(0, region.size(), budgets.plain, budgets.final_cut);
  std::vector<ContentFragment> out;
  out.reserve(cuts.size());
  HashState state = new_state();
  for (const Cut& cut : cuts) {
    ContentFragment f;
    f.name = object.name;
    f.content_object_size = region.size();
    f.internal_state = state;
    f.payload_offset = cut.offset;
    f.payload.assign(region.begin() + cut.offset,
                     region.begin() + cut.offset + cut.size);
    f.content_digest = digest;
    if (f.is_last())
      f.trailer = trailer;
    std::uint64_t aligned = align_down(cut.size);
    if (aligned > 0)
      state = compress(state, ByteView(region).subspan(cut.offset, aligned));
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ContentFragment> refragment(const ContentFragment& fragment,
                                        std::size_t o_mtu) {
  if (header_size(fragment) + fragment.payload.size() <= o_mtu)
    return {fragment};

  Budgets budgets =
      budgets_for(fragment.name, fragment.trailer, fragment.is_last(), o_mtu);
  std::vector<Cut> cuts = cut_region(fragment.payload_offset,
                                     fragment.payload.size(), budgets.plain,
                                     budgets.final_cut);
  std::vector<ContentFragment> out;
  out.reserve(cuts.size());
  HashState state = fragment.internal_state;
  for (const Cut& cut : cuts) {
    std::uint64_t rel = cut.offset - fragment.payload_offset;
    ContentFragment f;
    f.name = fragment.name;
    f.content_object_size = fragment.content_object_size;
    f.internal_state = state;
    f.payload_offset = cut.offset;
    f.payload.assign(fragment.payload.begin() + rel,
                     fragment.payload.begin() + rel + cut.size);
    f.content_digest = fragment.content_digest;
    if (f.is_last())
      f.trailer = fragment.trailer;
    std::uint64_t aligned = align_down(cut.size);
    if (aligned > 0)
      state = compress(state, ByteView(fragment.payload).subspan(rel, aligned));
    out.push_back(std::move(f));
  }
  return out;
}

} // namespace figoa
