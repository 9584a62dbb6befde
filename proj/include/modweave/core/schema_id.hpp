#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace modweave {

// Identifies a document schema, written "<dotted.name>/<major>".
struct SchemaId {
  std::string name;
  int major = 1;

  static SchemaId parse(std::string_view text);
  std::string str() const { return name + "/" + std::to_string(major); }

  auto operator<=>(const SchemaId&) const = default;
};

inline const SchemaId kCoreSchema{"comodi.core", 1};
inline const SchemaId kLayoutSchema{"comodi.gui.layout", 1};

}  // namespace modweave
