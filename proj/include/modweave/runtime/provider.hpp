#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "modweave/core/descriptor.hpp"

namespace modweave {

// Behaviors from the built-in table. `behavior` serves every provide port;
// `exports` maps internal default names to behavior specs.
struct BuiltinProvider {
  std::string behavior;
  std::map<std::string, std::string> exports;
  friend bool operator==(const BuiltinProvider&, const BuiltinProvider&) = default;
};

// A separate process speaking the line protocol on stdin/stdout, run through
// `/bin/sh -c command`. Default names in `exports` are invoked as ports of a
// fresh session of the same command.
struct ExternalProvider {
  std::string command;
  std::string working_directory;
  std::set<std::string> exports;
  friend bool operator==(const ExternalProvider&, const ExternalProvider&) = default;
};

using BehaviorProvider = std::variant<BuiltinProvider, ExternalProvider>;

bool provider_exports(const BehaviorProvider& provider, std::string_view name);

class ProviderSource {
 public:
  virtual ~ProviderSource() = default;
  virtual std::optional<BehaviorProvider> provider_for(const ComponentRef& ref) const = 0;
};

class ProviderTable : public ProviderSource {
 public:
  void add(const ComponentRef& ref, BehaviorProvider provider) {
    items_.insert_or_assign(ref, std::move(provider));
  }
  std::optional<BehaviorProvider> provider_for(const ComponentRef& ref) const override {
    auto it = items_.find(ref);
    if (it == items_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<ComponentRef, BehaviorProvider> items_;
};

}  // namespace modweave
