#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "figoa/errors.hpp"
#include "figoa/fragmenter.hpp"
#include "figoa/latency.hpp"
#include "figoa/simnet.hpp"
#include "figoa/verifier.hpp"

namespace fs = std::filesystem;
using namespace figoa;

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string& s = ss.str();
  return Bytes(s.begin(), s.end());
}

void write_file(const fs::path& path, ByteView data) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out)
    throw Error("short write to " + path.string());
}

// Key files hold one scheme-id byte followed by the raw key material.
void write_key_file(const fs::path& path, std::uint8_t scheme_id,
                    ByteView key) {
  Bytes data;
  data.push_back(scheme_id);
  append(data, key);
  write_file(path, data);
}

std::pair<std::uint8_t, Bytes> read_key_file(const fs::path& path) {
  Bytes data = read_file(path);
  if (data.empty())
    throw Error("empty key file " + path.string());
  return {data[0], Bytes(data.begin() + 1, data.end())};
}

std::vector<fs::path> fragment_files(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw Error(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".frag")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              // <digest>.<offset>.frag: numeric offset order within a digest
              auto key = [](const fs::path& p) {
                std::string stem = p.stem().string(); // <digest>.<offset>
                auto dot = stem.rfind('.');
                std::string digest = stem.substr(0, dot);
                std::uint64_t off =
                    dot == std::string::npos
                        ? 0
                        : std::strtoull(stem.c_str() + dot + 1, nullptr, 10);
                return std::make_pair(digest, off);
              };
              return key(a) < key(b);
            });
  return files;
}

std::string fragment_filename(const ContentFragment& f) {
  return f.content_digest.hex() + "." + std::to_string(f.payload_offset) +
         ".frag";
}

void print_manifest(const std::vector<ContentFragment>& fragments) {
  for (const ContentFragment& f : fragments)
    std::cout << f.payload_offset << ' ' << f.payload.size() << ' '
              << to_hex(serialize_state(f.internal_state)) << '\n';
}

int run_verify(const std::vector<ContentFragment>& fragments,
               const KeyRegistry* keys) {
  VerifierOptions options;
  options.require_signature = true; // this command acts as a consumer
  options.keys = keys;
  FragmentVerifier verifier(options);
  bool accepted = false;
  bool rejected = false;
  std::string reason;
  for (const ContentFragment& f : fragments) {
    FragmentDecision d = verifier.on_fragment(f, 0.0);
    std::cout << "offset " << f.payload_offset << ": ";
    if (std::get_if<Forward>(&d))
      std::cout << "Forward\n";
    else if (std::get_if<HoldHostage>(&d))
      std::cout << "HoldHostage\n";
    else if (std::get_if<DuplicateIgnored>(&d))
      std::cout << "DuplicateIgnored\n";
    else if (auto* r = std::get_if<Reject>(&d)) {
      std::cout << "Reject (" << r->reason << ")\n";
      rejected = true;
      reason = r->reason;
    } else if (auto* a = std::get_if<AcceptComplete>(&d)) {
      std::cout << "AcceptComplete (" << a->object.payload.size()
                << " payload bytes)\n";
      accepted = true;
    }
  }
  if (accepted) {
    std::cout << "AcceptComplete\n";
    return 0;
  }
  if (rejected)
    std::cout << "Reject: " << reason << '\n';
  else
    std::cout << "Incomplete: not all bytes arrived\n";
  return 1;
}

std::vector<unsigned> parse_flow_list(const std::string& text) {
  std::vector<unsigned> flows;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    flows.push_back(static_cast<unsigned>(std::stoul(item)));
  if (flows.empty())
    throw Error("empty flow list");
  return flows;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"figoa: secure cut-through fragmentation for signed named "
               "content"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "generate a signing key pair");
  std::string kg_scheme = "ed25519";
  std::string kg_out = "figoa-key";
  std::optional<std::uint64_t> kg_seed;
  keygen->add_option("--scheme", kg_scheme, "ed25519 or test")
      ->check(CLI::IsMember({"ed25519", "test"}));
  keygen->add_option("--out", kg_out, "output path prefix");
  keygen->add_option("--seed", kg_seed, "deterministic seed");

  // fragment
  auto* fragment = app.add_subcommand("fragment", "sign and fragment a file");
  std::string fr_in, fr_name, fr_key, fr_out_dir = ".", fr_key_name;
  std::uint64_t fr_mtu = 1500;
  fragment->add_option("--in", fr_in, "payload file")->required();
  fragment->add_option("--name", fr_name, "content name URI")->required();
  fragment->add_option("--key", fr_key, "private key file")->required();
  fragment->add_option("--mtu", fr_mtu, "outgoing MTU in bytes");
  fragment->add_option("--out-dir", fr_out_dir, "fragment output directory");
  fragment->add_option("--key-name", fr_key_name,
                       "use a named key locator instead of embedding the key");

  // refragment
  auto* refrag = app.add_subcommand("refragment",
                                    "split a fragment file for a smaller MTU");
  std::string rf_in, rf_out_dir = ".";
  std::uint64_t rf_mtu = 0;
  refrag->add_option("--in", rf_in, "fragment file")->required();
  refrag->add_option("--mtu", rf_mtu, "outgoing MTU in bytes")->required();
  refrag->add_option("--out-dir", rf_out_dir, "output directory");

  // verify
  auto* verify = app.add_subcommand("verify", "verify a directory of fragments");
  std::string vf_dir, vf_key, vf_key_name;
  std::optional<std::uint64_t> vf_shuffle;
  verify->add_option("--frags", vf_dir, "fragment directory")->required();
  verify->add_option("--key", vf_key, "public key file for a named locator");
  verify->add_option("--key-name", vf_key_name,
                     "name the public key is registered under");
  verify->add_option("--shuffle", vf_shuffle,
                     "feed fragments in seeded random order");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a topology config");
  std::string sm_config, sm_trace;
  std::uint64_t sm_seed = 1;
  simulate->add_option("--config", sm_config, "config file")->required();
  simulate->add_option("--seed", sm_seed, "simulation seed");
  simulate->add_option("--trace", sm_trace, "write the event trace CSV here");

  // latency-table
  auto* table = app.add_subcommand("latency-table",
                                   "closed-form interleaving latency table");
  std::string lt_flows = "5,10,20,30,50,100";
  unsigned lt_hops = 8;
  double lt_d = 0.010, lt_bw = 100e6;
  std::uint64_t lt_frag = 1300, lt_object = 8400;
  unsigned lt_k = 7;
  table->add_option("--flows", lt_flows, "comma-separated flow counts");
  table->add_option("-H,--hops", lt_hops, "links on the path");
  table->add_option("-d,--latency", lt_d, "per-link latency, seconds");
  table->add_option("--bw", lt_bw, "link bandwidth, bits/s");
  table->add_option("--frag-size", lt_frag, "fragment size, bytes");
  table->add_option("--object-size", lt_object, "object size, bytes");
  table->add_option("-k", lt_k, "fragments per object");

  // latency-curve
  auto* curve = app.add_subcommand("latency-curve",
                                   "latency ratio across fragment counts");
  std::string lc_flows = "10,20,50,100,100,50,20,10";
  double lc_d = 0.010, lc_bw = 100e6;
  std::uint64_t lc_object = 16800;
  unsigned lc_kmin = 1, lc_kmax = 12;
  curve->add_option("--flows", lc_flows,
                    "comma-separated per-link flow counts (defines hops)");
  curve->add_option("-d,--latency", lc_d, "per-link latency, seconds");
  curve->add_option("--bw", lc_bw, "link bandwidth, bits/s");
  curve->add_option("--object-size", lc_object, "object size, bytes");
  curve->add_option("--k-min", lc_kmin, "first fragment count");
  curve->add_option("--k-max", lc_kmax, "last fragment count");

  // overhead
  auto* overhead = app.add_subcommand("overhead",
                                      "segmentation byte overhead");
  std::uint64_t ov_object = 8192, ov_mtu = 1500, ov_sig = 192, ov_kl = 20,
                ov_fixed = 12;
  overhead->add_option("--object-size", ov_object, "object size, bytes");
  overhead->add_option("--mtu", ov_mtu, "segment MTU, bytes");
  overhead->add_option("--sig-bytes", ov_sig, "signature bytes per segment");
  overhead->add_option("--key-locator-bytes", ov_kl,
                       "key locator bytes per segment");
  overhead->add_option("--fixed-header-bytes", ov_fixed,
                       "fixed header bytes per segment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2; // help exits 0; any parse failure is usage error
  }

  try {
    if (keygen->parsed()) {
      SignatureScheme scheme = kg_scheme == "test" ? SignatureScheme::test
                                                   : SignatureScheme::ed25519;
      KeyPair kp = generate_keypair(scheme, kg_seed);
      write_key_file(kg_out + ".key", kp.scheme_id, kp.private_key);
      write_key_file(kg_out + ".pub", kp.scheme_id, kp.public_key);
      std::cout << "wrote " << kg_out << ".key and " << kg_out << ".pub ("
                << kg_scheme << ")\n";
      return 0;
    }

    if (fragment->parsed()) {
      auto [scheme_id, private_key] = read_key_file(fr_key);
      KeyPair kp;
      kp.scheme_id = scheme_id;
      kp.private_key = std::move(private_key);
      kp.public_key = public_key_from_private(scheme_id, kp.private_key);
      KeyLocator locator =
          fr_key_name.empty()
              ? KeyLocator::embedded(kp.public_key)
              : KeyLocator::named(Name::from_uri(fr_key_name));
      ContentObject object = make_content_object(
          Name::from_uri(fr_name), std::move(locator), read_file(fr_in), kp);
      auto fragments = fragment_content(object, fr_mtu);
      fs::create_directories(fr_out_dir);
      for (const ContentFragment& f : fragments)
        write_file(fs::path(fr_out_dir) / fragment_filename(f),
                   encode_content_fragment(f));
      print_manifest(fragments);
      return 0;
    }

    if (refrag->parsed()) {
      ContentFragment input = decode_content_fragment(read_file(rf_in));
      auto subs = refragment(input, rf_mtu);
      fs::create_directories(rf_out_dir);
      for (const ContentFragment& f : subs)
        write_file(fs::path(rf_out_dir) / fragment_filename(f),
                   encode_content_fragment(f));
      print_manifest(subs);
      return 0;
    }

    if (verify->parsed()) {
      KeyRegistry registry;
      if (!vf_key.empty()) {
        if (vf_key_name.empty())
          throw Error("--key requires --key-name");
        auto [scheme_id, key] = read_key_file(vf_key);
        (void)scheme_id;
        registry.add(Name::from_uri(vf_key_name), key);
      }
      std::vector<ContentFragment> fragments;
      for (const fs::path& path : fragment_files(vf_dir))
        fragments.push_back(decode_content_fragment(read_file(path)));
      if (vf_shuffle) {
        std::mt19937_64 gen(*vf_shuffle);
        std::shuffle(fragments.begin(), fragments.end(), gen);
      }
      return run_verify(fragments, &registry);
    }

    if (simulate->parsed()) {
      std::ifstream in(sm_config);
      if (!in)
        throw Error("cannot open " + sm_config);
      std::ostringstream ss;
      ss << in.rdbuf();
      SimConfig config = parse_sim_config(ss.str());
      SimResult result = run(config.topology, config.workload, sm_seed);
      if (!sm_trace.empty()) {
        std::ofstream out(sm_trace);
        if (!out)
          throw Error("cannot write " + sm_trace);
        write_trace_csv(out, result.trace);
      }
      for (const ConsumerStat& stat : result.consumers) {
        std::cout << stat.consumer << ' ' << stat.name << ": ";
        if (stat.completed_at)
          std::cout << "completed in "
                    << fixed2((*stat.completed_at - stat.issued_at) * 1e3)
                    << " ms\n";
        else if (stat.reject_reason)
          std::cout << "rejected (" << *stat.reject_reason << ")\n";
        else
          std::cout << "incomplete\n";
      }
      return 0;
    }

    if (table->parsed()) {
      LatencyParams params;
      params.hops = lt_hops;
      params.link_latency = lt_d;
      params.bandwidth = lt_bw;
      params.object_size = lt_object;
      params.fragment_size = lt_frag;
      params.k = lt_k;
      std::cout << "flows,inter_fragment_gap_ms,first_to_last_ms,"
                   "e2e_reassembly_ms,e2e_cut_through_ms,slowdown_pct\n";
      for (unsigned flows : parse_flow_list(lt_flows)) {
        params.flows = {flows};
        LatencyResult r = latency_model(params);
        std::cout << flows << ',' << fixed2(r.inter_fragment_gap * 1e3) << ','
                  << fixed2(r.first_to_last_gap * 1e3) << ','
                  << fixed2(r.e2e_reassembly * 1e3) << ','
                  << fixed2(r.e2e_cut_through * 1e3) << ','
                  << fixed2(r.slowdown_pct) << '\n';
      }
      return 0;
    }

    if (curve->parsed()) {
      LatencyParams params;
      params.flows = parse_flow_list(lc_flows);
      params.hops = static_cast<unsigned>(params.flows.size());
      params.link_latency = lc_d;
      params.bandwidth = lc_bw;
      params.object_size = lc_object;
      std::cout << "object_size,k,e2e_reassembly_ms,e2e_cut_through_ms,ratio\n";
      for (const CurveRow& row : latency_curve(params, lc_kmin, lc_kmax))
        std::cout << row.object_size << ',' << row.k << ','
                  << fixed2(row.e2e_reassembly * 1e3) << ','
                  << fixed2(row.e2e_cut_through * 1e3) << ','
                  << fixed2(row.ratio) << '\n';
      return 0;
    }

    if (overhead->parsed()) {
      double fraction =
          segmentation_overhead(ov_object, ov_mtu, ov_sig, ov_kl, ov_fixed);
      std::cout << "object_size,mtu,sig_bytes,key_locator_bytes,"
                   "fixed_header_bytes,overhead_pct\n";
      std::cout << ov_object << ',' << ov_mtu << ',' << ov_sig << ',' << ov_kl
                << ',' << ov_fixed << ',' << fixed2(fraction * 100.0) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
