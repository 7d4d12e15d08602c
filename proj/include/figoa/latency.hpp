#pragma once

#include <cstdint>
#include <vector>

namespace figoa {

/// Inputs to the closed-form interleaving latency model. Flows may be
/// one value (uniform across links) or one per link.
struct LatencyParams {
  unsigned hops = 8;
  double link_latency = 0.010; // d, seconds per link
  double bandwidth = 100e6;    // bits/s
  std::uint64_t object_size = 8400;
  /// Bytes per fragment; 0 derives ceil(object_size / k).
  std::uint64_t fragment_size = 0;
  unsigned k = 7; // fragments per object
  std::vector<unsigned> flows = {5};
};

/// All times in seconds; slowdown in percent. Gap figures are for the
/// busiest link.
struct LatencyResult {
  double fragment_tx;        // t_f
  double inter_fragment_gap; // F * t_f
  double first_to_last_gap;  // G = (k-1) * F * t_f + t_f
  double e2e_reassembly;     // sum over links of (d + G_l)
  double e2e_cut_through;    // sum of d + max G_l
  double slowdown_pct;       // 100 * reassembly / cut_through
};

LatencyResult latency_model(const LatencyParams& params);

struct CurveRow {
  std::uint64_t object_size;
  unsigned k;
  double e2e_reassembly;
  double e2e_cut_through;
  double ratio; // reassembly / cut_through
};

/// Sweep fragment count for a fixed object size (fragment size derived
/// as ceil(object_size / k) for each k).
std::vector<CurveRow> latency_curve(LatencyParams params, unsigned k_min,
                                    unsigned k_max);

/// Byte overhead of producer-side segmentation into independently
/// signed segments: 1 - object_size / (segments * mtu).
double segmentation_overhead(std::uint64_t object_size, std::uint64_t mtu,
                             std::uint64_t sig_bytes,
                             std::uint64_t key_locator_bytes,
                             std::uint64_t fixed_header_bytes);

} // namespace figoa
