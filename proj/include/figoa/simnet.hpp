#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "figoa/forwarder.hpp"

namespace figoa {

struct NodeSpec {
  std::string id;
  NodeConfig config;
};

struct LinkSpec {
  std::string a;
  std::string b;
  double latency = 0.010;   // seconds
  double bandwidth = 100e6; // bits/s
  std::uint32_t mtu_ab = 1500;
  std::uint32_t mtu_ba = 1500;
  /// Flows sharing the link, this one included; each content fragment
  /// occupies the link for flows * t_tx (round-robin interleaving).
  std::uint32_t flows = 1;
  /// Flip one payload bit in the nth content fragment crossing the
  /// link (0-based, either direction); -1 disables.
  std::int64_t corrupt_index = -1;
  /// Jitter content-fragment delivery by up to reorder_window fragment
  /// transmission times, forcing out-of-order arrival.
  bool reorder = false;
  std::uint32_t reorder_window = 4;
};

struct ContentSpec {
  Name name;
  std::string producer;
  std::uint64_t size = 0; // payload bytes, generated from seed
  std::uint64_t seed = 0;
};

struct SimTopology {
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  std::vector<ContentSpec> contents;
};

struct WorkloadItem {
  double time = 0.0;
  std::string consumer;
  Name name;
};

struct ConsumerStat {
  std::string consumer;
  std::string name;
  double issued_at = 0.0;
  /// First content-fragment send anywhere for this name (the producer
  /// or cache starting to serve).
  std::optional<double> serve_started_at;
  std::optional<double> completed_at;
  std::optional<std::string> reject_reason;
};

struct SimResult {
  std::vector<TraceEvent> trace;
  std::vector<ConsumerStat> consumers;
};

/// Deterministic discrete-event run: same topology, workload, and seed
/// give an identical trace.
SimResult run(const SimTopology& topology,
              const std::vector<WorkloadItem>& workload, std::uint64_t seed);

void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& trace);

struct SimConfig {
  SimTopology topology;
  std::vector<WorkloadItem> workload;
};

/// Parse the [node]/[link]/[content]/[workload] config text described
/// in docs/config-format.md.
SimConfig parse_sim_config(const std::string& text);

} // namespace figoa
