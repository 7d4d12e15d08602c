#include "figoa/name.hpp"

#include <algorithm>

#include "figoa/errors.hpp"

namespace figoa {

Name Name::from_uri(std::string_view uri) {
  if (uri.empty() || uri[0] != '/')
    throw Error("name uri must start with '/': \"" + std::string(uri) + "\"");
  Name name;
  std::size_t pos = 1;
  while (pos <= uri.size()) {
    std::size_t next = uri.find('/', pos);
    if (next == std::string_view::npos)
      next = uri.size();
    if (next == pos)
      throw Error("empty name component in \"" + std::string(uri) + "\"");
    name.components.emplace_back(uri.substr(pos, next - pos));
    pos = next + 1;
  }
  if (name.components.empty())
    throw Error("name must have at least one component");
  return name;
}

std::string Name::to_uri() const {
  std::string out;
  for (const auto& c : components) {
    out.push_back('/');
    out.append(c);
  }
  return out.empty() ? "/" : out;
}

bool Name::is_prefix_of(const Name& other) const {
  if (components.size() > other.components.size())
    return false;
  return std::equal(components.begin(), components.end(), other.components.begin());
}

} // namespace figoa
