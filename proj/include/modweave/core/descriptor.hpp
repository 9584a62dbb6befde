#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modweave/core/element.hpp"
#include "modweave/core/schema_id.hpp"
#include "modweave/core/type_spec.hpp"

namespace modweave {

enum class ParamMode { In, Out, InOut };

std::string_view to_string(ParamMode mode);
std::optional<ParamMode> parse_param_mode(std::string_view text);

// In and inout parameters are supplied by the caller; out and inout ones
// are produced by the callee.
inline bool is_input(ParamMode m) { return m != ParamMode::Out; }
inline bool is_output(ParamMode m) { return m != ParamMode::In; }

struct ParamSpec {
  std::string name;
  TypeSpec type;
  ParamMode mode = ParamMode::In;
  std::string doc;

  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct PortSignature {
  std::string name;
  std::vector<ParamSpec> params;
  TypeSpec return_type;
  std::string doc;

  const ParamSpec* find_param(std::string_view param) const;

  friend bool operator==(const PortSignature&, const PortSignature&) = default;
};

struct ProvidePortSpec {
  PortSignature signature;

  const std::string& name() const { return signature.name; }
  friend bool operator==(const ProvidePortSpec&,
                         const ProvidePortSpec&) = default;
};

// A call point inside a component. Optional ports carry the name of the
// internal behavior used when nothing is wired; mandatory ports carry none.
struct UsesPortSpec {
  PortSignature signature;
  bool mandatory = true;
  std::optional<std::string> default_binding;

  const std::string& name() const { return signature.name; }
  friend bool operator==(const UsesPortSpec&, const UsesPortSpec&) = default;
};

struct ComponentRef {
  std::string id;
  std::string version;

  std::string str() const { return id + "@" + version; }
  auto operator<=>(const ComponentRef&) const = default;
};

struct ComponentDescriptor {
  std::string id;
  std::string version;
  std::string doc;
  std::vector<ProvidePortSpec> provide_ports;
  // Declaration order is the canonical call-point order.
  std::vector<UsesPortSpec> uses_ports;
  std::optional<std::string> skin_ref;
  SchemaId schema_id = kCoreSchema;
  // Root-level elements introduced by extension schemas, kept verbatim.
  std::vector<Element> extensions;

  ComponentRef ref() const { return {id, version}; }
  const ProvidePortSpec* find_provide(std::string_view name) const;
  const UsesPortSpec* find_uses(std::string_view name) const;

  friend bool operator==(const ComponentDescriptor&,
                         const ComponentDescriptor&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string path;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string format_diagnostic(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

bool is_identifier(std::string_view text);     // [A-Za-z_][A-Za-z0-9_]*
bool is_component_id(std::string_view text);   // reverse-domain, >= 2 labels
bool is_version(std::string_view text);        // dotted numeric

// Checks every descriptor-level invariant. Empty result means valid.
std::vector<Diagnostic> validate_descriptor(const ComponentDescriptor& d);

}  // namespace modweave
