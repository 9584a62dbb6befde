#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modweave/core/descriptor.hpp"
#include "modweave/core/error.hpp"
#include "modweave/runtime/provider.hpp"

namespace modweave {

enum class RegistryErrorKind { Duplicate, Invalid, NotFound, Io };

class RegistryError : public Error {
 public:
  RegistryError(RegistryErrorKind kind, const std::string& message)
      : Error(message), kind_(kind) {}
  RegistryErrorKind kind() const { return kind_; }

 private:
  RegistryErrorKind kind_;
};

// Presentation only: nothing outside rendering reads it.
struct SkinSpec {
  std::string ref;
  double base_size = 64;
  std::string color = "#b8c4d0";
  std::string icon = "box";
  std::map<std::string, std::string> port_hints;  // port name -> hint

  friend bool operator==(const SkinSpec&, const SkinSpec&) = default;
};

// What resolve_skin returns for unknown refs.
SkinSpec default_skin();

// <skin ref=".." size=".." color=".." icon=".."><port name=".." hint=".."/></skin>
std::string serialize_skin(const SkinSpec& skin);
SkinSpec parse_skin(std::string_view text);

// <manifest><builtin behavior="seq_driver"/><export name=".." behavior=".."/></manifest>
// <manifest><external command=".." workdir=".."/><export name=".."/></manifest>
std::string serialize_manifest(const BehaviorProvider& provider);
BehaviorProvider parse_manifest(std::string_view text);

struct ComponentPackage {
  ComponentDescriptor descriptor;
  BehaviorProvider behavior;
  std::optional<SkinSpec> skin;

  friend bool operator==(const ComponentPackage&, const ComponentPackage&) = default;
};

// Descriptor diagnostics plus manifest coverage of every default binding.
std::vector<Diagnostic> validate_package(const ComponentPackage& pkg);

}  // namespace modweave
