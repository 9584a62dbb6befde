#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace modweave {

// A generic XML element tree. Attribute order is kept as given; text is only
// carried by leaf elements.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  void set_attribute(std::string key, std::string value) {
    for (auto& [k, v] : attributes) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    attributes.emplace_back(std::move(key), std::move(value));
  }

  friend bool operator==(const Element&, const Element&) = default;
};

}  // namespace modweave
