#include <sstream>

#include "figoa/errors.hpp"
#include "figoa/simnet.hpp"

namespace figoa {
namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok)
    out.push_back(tok);
  return out;
}

double parse_double(const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size())
      fail(line, "trailing characters in number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "bad number '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, std::size_t line) {
  double d = parse_double(v, line);
  if (d < 0 || d != static_cast<std::uint64_t>(d))
    fail(line, "expected a non-negative integer, got '" + v + "'");
  return static_cast<std::uint64_t>(d);
}

bool parse_bool(const std::string& v, std::size_t line) {
  if (v == "true" || v == "1")
    return true;
  if (v == "false" || v == "0")
    return false;
  fail(line, "expected true or false, got '" + v + "'");
}

} // namespace

SimConfig parse_sim_config(const std::string& text) {
  SimConfig config;
  enum class Section { none, node, link, content, workload } section =
      Section::none;
  NodeSpec* cur_node = nullptr;
  LinkSpec* cur_link = nullptr;
  ContentSpec* cur_content = nullptr;

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = strip(line);
    if (line.empty())
      continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        fail(lineno, "unterminated section header");
      auto tokens = split_ws(line.substr(1, line.size() - 2));
      if (tokens.empty())
        fail(lineno, "empty section header");
      const std::string& kind = tokens[0];
      if (kind == "node") {
        if (tokens.size() != 2)
          fail(lineno, "[node <id>] takes one id");
        config.topology.nodes.push_back({tokens[1], NodeConfig{}});
        cur_node = &config.topology.nodes.back();
        section = Section::node;
      } else if (kind == "link") {
        if (tokens.size() != 3)
          fail(lineno, "[link <a> <b>] takes two node ids");
        LinkSpec link;
        link.a = tokens[1];
        link.b = tokens[2];
        config.topology.links.push_back(std::move(link));
        cur_link = &config.topology.links.back();
        section = Section::link;
      } else if (kind == "content") {
        if (tokens.size() != 2)
          fail(lineno, "[content <name>] takes one name");
        ContentSpec content;
        try {
          content.name = Name::from_uri(tokens[1]);
        } catch (const Error& e) {
          fail(lineno, e.what());
        }
        config.topology.contents.push_back(std::move(content));
        cur_content = &config.topology.contents.back();
        section = Section::content;
      } else if (kind == "workload") {
        if (tokens.size() != 1)
          fail(lineno, "[workload] takes no arguments");
        section = Section::workload;
      } else {
        fail(lineno, "unknown section '" + kind + "'");
      }
      continue;
    }

    if (section == Section::workload) {
      auto tokens = split_ws(line);
      if (tokens.size() != 3)
        fail(lineno, "workload rows are '<time> <consumer> <name>'");
      WorkloadItem item;
      item.time = parse_double(tokens[0], lineno);
      item.consumer = tokens[1];
      try {
        item.name = Name::from_uri(tokens[2]);
      } catch (const Error& e) {
        fail(lineno, e.what());
      }
      config.workload.push_back(std::move(item));
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(lineno, "expected 'key = value'");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(lineno, "expected 'key = value'");

    switch (section) {
    case Section::node: {
      NodeConfig& c = cur_node->config;
      if (key == "mode") {
        if (value == "cut_through")
          c.mode = NodeMode::cut_through;
        else if (value == "hop_by_hop_reassembly")
          c.mode = NodeMode::hop_by_hop_reassembly;
        else
          fail(lineno, "unknown mode '" + value + "'");
      } else if (key == "verify_signatures") {
        c.verify_signatures = parse_bool(value, lineno);
      } else if (key == "cs_capacity") {
        c.cs_capacity = parse_u64(value, lineno);
      } else if (key == "buffer_timeout") {
        c.buffer_timeout = parse_double(value, lineno);
      } else {
        fail(lineno, "unknown node key '" + key + "'");
      }
      break;
    }
    case Section::link: {
      LinkSpec& l = *cur_link;
      if (key == "latency")
        l.latency = parse_double(value, lineno);
      else if (key == "bandwidth")
        l.bandwidth = parse_double(value, lineno);
      else if (key == "mtu")
        l.mtu_ab = l.mtu_ba = static_cast<std::uint32_t>(parse_u64(value, lineno));
      else if (key == "mtu_ab")
        l.mtu_ab = static_cast<std::uint32_t>(parse_u64(value, lineno));
      else if (key == "mtu_ba")
        l.mtu_ba = static_cast<std::uint32_t>(parse_u64(value, lineno));
      else if (key == "flows")
        l.flows = static_cast<std::uint32_t>(parse_u64(value, lineno));
      else if (key == "corrupt_index")
        l.corrupt_index = static_cast<std::int64_t>(parse_u64(value, lineno));
      else if (key == "reorder")
        l.reorder = parse_bool(value, lineno);
      else if (key == "reorder_window")
        l.reorder_window = static_cast<std::uint32_t>(parse_u64(value, lineno));
      else
        fail(lineno, "unknown link key '" + key + "'");
      break;
    }
    case Section::content: {
      ContentSpec& c = *cur_content;
      if (key == "producer")
        c.producer = value;
      else if (key == "size")
        c.size = parse_u64(value, lineno);
      else if (key == "seed")
        c.seed = parse_u64(value, lineno);
      else
        fail(lineno, "unknown content key '" + key + "'");
      break;
    }
    default:
      fail(lineno, "key outside any section");
    }
  }
  return config;
}

} // namespace figoa
