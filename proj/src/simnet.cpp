#include "figoa/simnet.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <set>

#include "figoa/errors.hpp"

namespace figoa {
namespace {

struct FaceRef {
  std::size_t link;
  bool from_a; // sending direction a->b
};

struct Event {
  double time;
  std::uint64_t seq;
  enum class Kind { delivery, workload } kind;
  // delivery
  std::string node;
  FaceId face = kAppFace;
  Bytes bytes;
  // workload
  std::size_t workload_index = 0;

  bool operator>(const Event& other) const {
    if (time != other.time)
      return time > other.time;
    return seq > other.seq;
  }
};

struct PacketSummary {
  std::string name;
  std::uint64_t offset;
  std::uint64_t size;
  bool is_content_fragment;
};

PacketSummary summarize(const Packet& packet, std::size_t encoded_size) {
  return std::visit(
      [&](const auto& p) -> PacketSummary {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Interest>)
          return {p.name.to_uri(), 0, encoded_size, false};
        else if constexpr (std::is_same_v<T, InterestFragment>)
          return {"-", p.seq, p.payload.size(), false};
        else
          return {p.name.to_uri(), p.payload_offset, p.payload.size(), true};
      },
      packet);
}

class Sim {
public:
  Sim(const SimTopology& topology, const std::vector<WorkloadItem>& workload,
      std::uint64_t seed)
      : topology_(topology), workload_(workload), rng_(seed) {
    build();
  }

  SimResult go() {
    for (std::size_t i = 0; i < workload_.size(); ++i) {
      Event e;
      e.time = workload_[i].time;
      e.seq = next_seq_++;
      e.kind = Event::Kind::workload;
      e.workload_index = i;
      queue_.push(std::move(e));
    }
    while (!queue_.empty()) {
      Event e = queue_.top();
      queue_.pop();
      now_ = e.time;
      if (e.kind == Event::Kind::workload)
        issue(workload_[e.workload_index]);
      else
        deliver(e);
    }
    return finish();
  }

private:
  void build() {
    std::set<std::string> ids;
    for (const NodeSpec& spec : topology_.nodes) {
      if (spec.id.empty() || !ids.insert(spec.id).second)
        throw InvalidTopology("duplicate or empty node id '" + spec.id + "'");
      nodes_.emplace(spec.id,
                     std::make_unique<Node>(spec.id, spec.config, &keys_));
    }
    for (std::size_t li = 0; li < topology_.links.size(); ++li) {
      const LinkSpec& link = topology_.links[li];
      Node* na = node(link.a);
      Node* nb = node(link.b);
      if (link.latency < 0 || link.bandwidth <= 0)
        throw InvalidTopology("link " + link.a + "-" + link.b +
                              ": bad latency or bandwidth");
      if (link.flows == 0)
        throw InvalidTopology("link " + link.a + "-" + link.b +
                              ": flows must be >= 1");
      FaceId fa = static_cast<FaceId>(faces_[link.a].size());
      FaceId fb = static_cast<FaceId>(faces_[link.b].size());
      try {
        na->add_face(fa, link.mtu_ab);
        nb->add_face(fb, link.mtu_ba);
      } catch (const MtuTooSmall& e) {
        throw InvalidTopology(std::string("link ") + link.a + "-" + link.b +
                              ": " + e.what());
      }
      faces_[link.a].push_back({li, true});
      faces_[link.b].push_back({li, false});
      peer_face_[{li, true}] = fb;  // a->b arrives at b's face fb
      peer_face_[{li, false}] = fa;
      busy_[{li, true}] = 0.0;
      busy_[{li, false}] = 0.0;
      corrupt_seen_[li] = 0;
    }
    check_connected();
    for (const ContentSpec& content : topology_.contents)
      publish(content);
    for (const WorkloadItem& item : workload_)
      if (!nodes_.count(item.consumer))
        throw InvalidTopology("workload references unknown node '" +
                              item.consumer + "'");
    for (auto& [id, n] : nodes_) {
      n->trace = [this](const TraceEvent& ev) { trace_.push_back(ev); };
    }
  }

  Node* node(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end())
      throw InvalidTopology("unknown node '" + id + "'");
    return it->second.get();
  }

  void check_connected() {
    if (nodes_.empty())
      throw InvalidTopology("no nodes");
    std::set<std::string> seen;
    std::vector<std::string> frontier{nodes_.begin()->first};
    seen.insert(frontier.front());
    while (!frontier.empty()) {
      std::string cur = frontier.back();
      frontier.pop_back();
      for (const LinkSpec& link : topology_.links) {
        std::string other;
        if (link.a == cur)
          other = link.b;
        else if (link.b == cur)
          other = link.a;
        else
          continue;
        if (seen.insert(other).second)
          frontier.push_back(other);
      }
    }
    if (seen.size() != nodes_.size())
      throw InvalidTopology("topology is not connected");
  }

  Bytes deterministic_payload(std::uint64_t size, std::uint64_t seed) {
    Bytes payload;
    payload.reserve(size);
    std::mt19937_64 gen(seed);
    while (payload.size() < size) {
      std::uint64_t word = gen();
      for (int i = 7; i >= 0 && payload.size() < size; --i)
        payload.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
    }
    return payload;
  }

  void publish(const ContentSpec& content) {
    Node* producer = node(content.producer);
    if (content.size == 0)
      throw InvalidTopology("content " + content.name.to_uri() +
                            ": size must be positive");
    KeyPair kp = generate_keypair(SignatureScheme::ed25519, content.seed);
    ContentObject object = make_content_object(
        content.name, KeyLocator::embedded(kp.public_key),
        deterministic_payload(content.size, content.seed), kp);
    producer->produce(std::move(object));

    // Static FIBs: everyone routes toward the producer, shortest path.
    std::map<std::string, std::pair<std::string, std::size_t>> parent;
    std::vector<std::string> frontier{content.producer};
    std::set<std::string> seen{content.producer};
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const std::string& cur : frontier) {
        for (std::size_t li = 0; li < topology_.links.size(); ++li) {
          const LinkSpec& link = topology_.links[li];
          std::string other;
          if (link.a == cur)
            other = link.b;
          else if (link.b == cur)
            other = link.a;
          else
            continue;
          if (seen.insert(other).second) {
            parent[other] = {cur, li};
            next.push_back(other);
          }
        }
      }
      frontier = std::move(next);
    }
    for (const auto& [child, up] : parent) {
      const auto& [up_node, li] = up;
      const auto& refs = faces_[child];
      for (FaceId f = 0; f < static_cast<FaceId>(refs.size()); ++f) {
        if (refs[f].link == li) {
          node(child)->add_route(content.name, f);
          break;
        }
      }
    }
  }

  void issue(const WorkloadItem& item) {
    Interest interest;
    interest.name = item.name;
    std::uint64_t nonce = rng_();
    for (int i = 7; i >= 0; --i)
      interest.nonce[7 - i] = static_cast<std::uint8_t>(nonce >> (8 * i));
    Node* consumer = node(item.consumer);
    auto sends = consumer->express_interest(interest, now_);
    transmit(item.consumer, sends);
  }

  void deliver(const Event& e) {
    Node* receiver = node(e.node);
    Packet packet;
    bool decoded = true;
    PacketSummary summary{"-", 0, e.bytes.size(), false};
    try {
      packet = decode_packet(e.bytes);
      summary = summarize(packet, e.bytes.size());
    } catch (const Error&) {
      decoded = false;
    }
    trace_.push_back({now_, e.node, "receive", summary.name, summary.offset,
                      summary.size, e.face});
    if (!decoded)
      return; // corrupt beyond parsing: dropped
    auto sends = receiver->on_packet(packet, e.face, now_);
    transmit(e.node, sends);
  }

  void transmit(const std::string& sender, const std::vector<Node::Send>& sends) {
    for (const Node::Send& send : sends) {
      if (send.face == kAppFace)
        continue;
      const auto& refs = faces_[sender];
      if (send.face < 0 || send.face >= static_cast<FaceId>(refs.size()))
        throw InvariantViolation("send on unknown face");
      FaceRef ref = refs[send.face];
      const LinkSpec& link = topology_.links[ref.link];

      Bytes bytes = encode_packet(send.packet);
      PacketSummary summary = summarize(send.packet, bytes.size());

      if (summary.is_content_fragment && link.corrupt_index >= 0 &&
          corrupt_seen_[ref.link]++ ==
              static_cast<std::uint64_t>(link.corrupt_index))
        bytes = corrupt_payload_bit(bytes);

      double t_tx = static_cast<double>(bytes.size()) * 8.0 / link.bandwidth;
      double& busy = busy_[{ref.link, ref.from_a}];
      double start = std::max(busy, now_);
      // Round-robin interleaving: F-1 foreign fragments ride between
      // consecutive fragments of this flow.
      busy = start + (summary.is_content_fragment ? link.flows * t_tx : t_tx);
      double arrive = start + t_tx + link.latency;
      if (summary.is_content_fragment && link.reorder)
        arrive += std::uniform_real_distribution<double>(
                      0.0, link.reorder_window * t_tx)(rng_);

      trace_.push_back({start, sender, "send", summary.name, summary.offset,
                        summary.size, send.face});
      if (summary.is_content_fragment && !serve_start_.count(summary.name))
        serve_start_[summary.name] = start;

      Event e;
      e.time = arrive;
      e.seq = next_seq_++;
      e.kind = Event::Kind::delivery;
      e.node = ref.from_a ? link.b : link.a;
      e.face = peer_face_[{ref.link, ref.from_a}];
      e.bytes = std::move(bytes);
      queue_.push(std::move(e));
    }
  }

  // Flip one payload bit but keep the packet well-formed, so the
  // corruption reaches the verifier instead of dying in the decoder.
  Bytes corrupt_payload_bit(const Bytes& bytes) {
    ContentFragment f = decode_content_fragment(bytes);
    std::uint64_t bit = rng_() % (f.payload.size() * 8);
    f.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    return encode_content_fragment(f);
  }

  SimResult finish() {
    SimResult result;
    std::stable_sort(trace_.begin(), trace_.end(),
                     [](const TraceEvent& x, const TraceEvent& y) {
                       return x.time < y.time;
                     });
    result.trace = std::move(trace_);
    for (const WorkloadItem& item : workload_) {
      ConsumerStat stat;
      stat.consumer = item.consumer;
      stat.name = item.name.to_uri();
      stat.issued_at = item.time;
      auto it = serve_start_.find(stat.name);
      if (it != serve_start_.end())
        stat.serve_started_at = it->second;
      Node* consumer = node(item.consumer);
      for (const Node::Delivery& d : consumer->deliveries()) {
        if (d.object.name == item.name && d.time >= item.time) {
          stat.completed_at = d.time;
          break;
        }
      }
      if (!stat.completed_at && !consumer->rejections().empty())
        stat.reject_reason = consumer->rejections().front();
      result.consumers.push_back(std::move(stat));
    }
    return result;
  }

  const SimTopology& topology_;
  const std::vector<WorkloadItem>& workload_;
  std::mt19937_64 rng_;

  std::map<std::string, std::unique_ptr<Node>> nodes_;
  std::map<std::string, std::vector<FaceRef>> faces_;
  std::map<std::pair<std::size_t, bool>, FaceId> peer_face_;
  std::map<std::pair<std::size_t, bool>, double> busy_;
  std::map<std::size_t, std::uint64_t> corrupt_seen_;
  KeyRegistry keys_;

  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
  std::vector<TraceEvent> trace_;
  std::map<std::string, double> serve_start_;
};

} // namespace

SimResult run(const SimTopology& topology,
              const std::vector<WorkloadItem>& workload, std::uint64_t seed) {
  Sim sim(topology, workload, seed);
  return sim.go();
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& trace) {
  out << "time,node,kind,name,offset,size,face\n";
  char buf[32];
  for (const TraceEvent& e : trace) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.time);
    out << buf << ',' << e.node << ',' << e.kind << ',' << e.name << ','
        << e.offset << ',' << e.size << ',' << e.face << '\n';
  }
}

} // namespace figoa
