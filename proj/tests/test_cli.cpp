#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("figoa-cli-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const {
    return (path / name).string();
  }
};

int run_cli(const std::string& args, std::string* out = nullptr) {
  std::string cmd = std::string(FIGOA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string captured;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe))
    captured.append(buf, n);
  int status = pclose(pipe);
  if (out)
    *out = captured;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_payload(const std::string& path, std::size_t size,
                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::ofstream out(path, std::ios::binary);
  for (std::size_t i = 0; i < size; ++i)
    out.put(static_cast<char>(rng() & 0xff));
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<fs::path> frag_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".frag")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n')
      ++n;
  return n;
}

} // namespace

TEST_CASE("no subcommand is a usage error") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("keygen is deterministic under a seed") {
  TempDir dir;
  CHECK(run_cli("keygen --scheme test --seed 5 --out " + (dir / "a")) == 0);
  CHECK(run_cli("keygen --scheme test --seed 5 --out " + (dir / "b")) == 0);
  CHECK(run_cli("keygen --scheme test --seed 6 --out " + (dir / "c")) == 0);
  CHECK(slurp(dir / "a.key") == slurp(dir / "b.key"));
  CHECK(slurp(dir / "a.pub") == slurp(dir / "b.pub"));
  CHECK(slurp(dir / "a.key") != slurp(dir / "c.key"));
  CHECK(run_cli("keygen --scheme rsa --out " + (dir / "x")) == 2);
}

TEST_CASE("fragment, shuffle, verify round trip") {
  TempDir dir;
  write_payload(dir / "payload.bin", 4096, 1);
  REQUIRE(run_cli("keygen --scheme ed25519 --seed 3 --out " + (dir / "k")) ==
          0);

  std::string manifest;
  int rc = run_cli("fragment --in " + (dir / "payload.bin") +
                       " --name /a --key " + (dir / "k.key") +
                       " --mtu 1500 --out-dir " + (dir / "frags"),
                   &manifest);
  REQUIRE(rc == 0);
  CHECK(count_lines(manifest) == 4);
  CHECK(frag_files(dir.path / "frags").size() == 4);

  std::string out;
  CHECK(run_cli("verify --frags " + (dir / "frags") + " --shuffle 3", &out) ==
        0);
  CHECK(out.find("AcceptComplete") != std::string::npos);

  // every seed works, not just one lucky order
  for (int seed = 0; seed < 5; ++seed)
    CHECK(run_cli("verify --frags " + (dir / "frags") + " --shuffle " +
                  std::to_string(seed)) == 0);
}

TEST_CASE("verify with a named key locator needs the registry") {
  TempDir dir;
  write_payload(dir / "payload.bin", 2000, 2);
  REQUIRE(run_cli("keygen --scheme ed25519 --seed 4 --out " + (dir / "k")) ==
          0);
  REQUIRE(run_cli("fragment --in " + (dir / "payload.bin") +
                  " --name /a --key " + (dir / "k.key") +
                  " --key-name /keys/a --out-dir " + (dir / "frags")) == 0);

  // without the key nothing resolves: strict consumer rejects
  std::string out;
  CHECK(run_cli("verify --frags " + (dir / "frags"), &out) == 1);
  CHECK(out.find("Reject") != std::string::npos);

  CHECK(run_cli("verify --frags " + (dir / "frags") + " --key " +
                (dir / "k.pub") + " --key-name /keys/a") == 0);

  // --key without --key-name is an error
  CHECK(run_cli("verify --frags " + (dir / "frags") + " --key " +
                (dir / "k.pub")) == 2);
}

TEST_CASE("verify failures map to exit codes") {
  TempDir dir;
  write_payload(dir / "payload.bin", 4096, 3);
  REQUIRE(run_cli("keygen --scheme test --seed 1 --out " + (dir / "k")) == 0);
  REQUIRE(run_cli("fragment --in " + (dir / "payload.bin") +
                  " --name /a --key " + (dir / "k.key") + " --out-dir " +
                  (dir / "frags")) == 0);
  auto files = frag_files(dir.path / "frags");
  REQUIRE(files.size() == 4);

  SUBCASE("missing fragment is incomplete") {
    fs::remove(files[1]);
    std::string out;
    CHECK(run_cli("verify --frags " + (dir / "frags"), &out) == 1);
    CHECK(out.find("Incomplete") != std::string::npos);
  }
  SUBCASE("flipped payload byte is rejected") {
    auto bytes = slurp(files[0].string());
    bytes[bytes.size() - 10] ^= 1; // inside the fragment payload
    std::ofstream(files[0], std::ios::binary)
        .write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::string out;
    CHECK(run_cli("verify --frags " + (dir / "frags"), &out) == 1);
    CHECK(out.find("Reject") != std::string::npos);
  }
  SUBCASE("truncated file is an error") {
    auto bytes = slurp(files[0].string());
    std::ofstream(files[0], std::ios::binary)
        .write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    CHECK(run_cli("verify --frags " + (dir / "frags")) == 2);
  }
}

TEST_CASE("fragment rejects an unusable MTU") {
  TempDir dir;
  write_payload(dir / "payload.bin", 1000, 4);
  REQUIRE(run_cli("keygen --scheme test --seed 1 --out " + (dir / "k")) == 0);
  CHECK(run_cli("fragment --in " + (dir / "payload.bin") +
                " --name /a --key " + (dir / "k.key") + " --mtu 80 --out-dir " +
                (dir / "frags")) == 2);
}

TEST_CASE("refragment splits a stored fragment") {
  TempDir dir;
  write_payload(dir / "payload.bin", 4096, 5);
  REQUIRE(run_cli("keygen --scheme test --seed 2 --out " + (dir / "k")) == 0);
  REQUIRE(run_cli("fragment --in " + (dir / "payload.bin") +
                  " --name /a --key " + (dir / "k.key") + " --out-dir " +
                  (dir / "frags")) == 0);
  auto files = frag_files(dir.path / "frags");
  REQUIRE(files.size() == 4);

  // split the first fragment for a 700-byte MTU, in place
  std::string manifest;
  fs::path first = files[0];
  fs::path moved = dir.path / "first.frag.orig";
  fs::rename(first, moved);
  CHECK(run_cli("refragment --in " + moved.string() + " --mtu 700 --out-dir " +
                    (dir / "frags"),
                &manifest) == 0);
  CHECK(count_lines(manifest) == 3);
  CHECK(frag_files(dir.path / "frags").size() == 6);

  // the mixed-granularity stream still verifies
  CHECK(run_cli("verify --frags " + (dir / "frags") + " --shuffle 1") == 0);
}

TEST_CASE("simulate runs a config and writes a deterministic trace") {
  TempDir dir;
  std::ofstream cfg(dir / "net.cfg");
  cfg << "[node A]\n[node R]\n[node P]\n"
         "[link A R]\n[link R P]\n"
         "[content /video/clip]\nproducer = P\nsize = 4096\nseed = 42\n"
         "[workload]\n0.0 A /video/clip\n";
  cfg.close();

  std::string out;
  CHECK(run_cli("simulate --config " + (dir / "net.cfg") + " --seed 1 --trace " +
                    (dir / "t1.csv"),
                &out) == 0);
  CHECK(out.find("completed in") != std::string::npos);
  CHECK(run_cli("simulate --config " + (dir / "net.cfg") + " --seed 1 --trace " +
                (dir / "t2.csv")) == 0);
  CHECK(slurp(dir / "t1.csv") == slurp(dir / "t2.csv"));
  REQUIRE_FALSE(slurp(dir / "t1.csv").empty());

  CHECK(run_cli("simulate --config " + (dir / "missing.cfg")) == 2);
}

TEST_CASE("latency table prints the published values") {
  std::string out;
  CHECK(run_cli("latency-table", &out) == 0);
  CHECK(out.find("flows,inter_fragment_gap_ms,first_to_last_ms,"
                 "e2e_reassembly_ms,e2e_cut_through_ms,slowdown_pct") !=
        std::string::npos);
  CHECK(out.find("5,0.52,3.22,105.79,83.22,127.12") != std::string::npos);
  CHECK(out.find("100,10.40,62.50,580.03,142.50,407.03") != std::string::npos);
  CHECK(count_lines(out) == 7);
}

TEST_CASE("latency curve crosses two at six fragments") {
  std::string out;
  CHECK(run_cli("latency-curve --k-min 6 --k-max 6", &out) == 0);
  CHECK(out.find("16800,6,484.99,192.22,2.52") != std::string::npos);
}

TEST_CASE("overhead prints the closed-form percentage") {
  std::string out;
  CHECK(run_cli("overhead", &out) == 0);
  CHECK(out.find("8192,1500,192,20,12,21.98") != std::string::npos);
}
