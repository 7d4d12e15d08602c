#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace figoa {

/// Hierarchical content name: an ordered list of non-empty components,
/// e.g. /ndn/usa/cnn/frontpage/news. Components are byte strings; the URI
/// helpers assume printable components separated by '/'.
struct Name {
  std::vector<std::string> components;

  Name() = default;
  explicit Name(std::vector<std::string> comps) : components(std::move(comps)) {}

  /// Parse "/a/b/c". Throws Error on an empty name or empty component.
  static Name from_uri(std::string_view uri);
  std::string to_uri() const;

  bool empty() const { return components.empty(); }
  std::size_t size() const { return components.size(); }

  /// True when this name's components are a leading subsequence of other's.
  bool is_prefix_of(const Name& other) const;

  auto operator<=>(const Name&) const = default;
};

} // namespace figoa
