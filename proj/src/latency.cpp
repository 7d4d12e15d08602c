#include "figoa/latency.hpp"

#include <algorithm>
#include <string>

#include "figoa/errors.hpp"

namespace figoa {
namespace {

void validate(const LatencyParams& p) {
  if (p.hops == 0 || p.link_latency <= 0 || p.bandwidth <= 0 ||
      p.object_size == 0 || p.k == 0 || p.flows.empty())
    throw InvariantViolation("latency parameters must be positive");
  if (p.flows.size() != 1 && p.flows.size() != p.hops)
    throw InvariantViolation("flows must be scalar or one per link");
  for (unsigned f : p.flows)
    if (f == 0)
      throw InvariantViolation("flow counts must be positive");
}

unsigned flow_on(const LatencyParams& p, unsigned link) {
  return p.flows.size() == 1 ? p.flows[0] : p.flows[link];
}

} // namespace

LatencyResult latency_model(const LatencyParams& params) {
  validate(params);
  std::uint64_t frag_bytes =
      params.fragment_size != 0
          ? params.fragment_size
          : (params.object_size + params.k - 1) / params.k;
  double t_f = static_cast<double>(frag_bytes) * 8.0 / params.bandwidth;

  double sum_d = 0, sum_gap = 0, max_gap = 0, max_flow_gap = 0;
  for (unsigned l = 0; l < params.hops; ++l) {
    double gap = flow_on(params, l) * t_f;
    double g = (params.k - 1) * gap + t_f;
    sum_d += params.link_latency;
    sum_gap += g;
    max_gap = std::max(max_gap, g);
    max_flow_gap = std::max(max_flow_gap, gap);
  }

  LatencyResult r;
  r.fragment_tx = t_f;
  r.inter_fragment_gap = max_flow_gap;
  r.first_to_last_gap = max_gap;
  r.e2e_reassembly = sum_d + sum_gap;
  r.e2e_cut_through = sum_d + max_gap;
  r.slowdown_pct = 100.0 * r.e2e_reassembly / r.e2e_cut_through;
  return r;
}

std::vector<CurveRow> latency_curve(LatencyParams params, unsigned k_min,
                                    unsigned k_max) {
  if (k_min == 0 || k_min > k_max)
    throw InvariantViolation("bad k range");
  std::vector<CurveRow> rows;
  for (unsigned k = k_min; k <= k_max; ++k) {
    params.k = k;
    params.fragment_size = 0;
    LatencyResult r = latency_model(params);
    rows.push_back({params.object_size, k, r.e2e_reassembly,
                    r.e2e_cut_through, r.e2e_reassembly / r.e2e_cut_through});
  }
  return rows;
}

double segmentation_overhead(std::uint64_t object_size, std::uint64_t mtu,
                             std::uint64_t sig_bytes,
                             std::uint64_t key_locator_bytes,
                             std::uint64_t fixed_header_bytes) {
  if (object_size == 0)
    throw InvariantViolation("object size must be positive");
  std::uint64_t per_segment =
      sig_bytes + key_locator_bytes + fixed_header_bytes;
  if (mtu <= per_segment)
    throw MtuTooSmall("mtu " + std::to_string(mtu) +
                      " not above per-segment overhead " +
                      std::to_string(per_segment));
  std::uint64_t room = mtu - per_segment;
  std::uint64_t segments = (object_size + room - 1) / room;
  return 1.0 - static_cast<double>(object_size) /
                   (static_cast<double>(segments) * static_cast<double>(mtu));
}

} // namespace figoa
