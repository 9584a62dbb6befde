#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "modweave/compat/compat.hpp"
#include "modweave/core/descriptor.hpp"
#include "modweave/core/element.hpp"
#include "modweave/core/error.hpp"
#include "modweave/graph/catalog.hpp"

namespace modweave {

struct InstanceNode {
  std::string id;
  ComponentRef component;
  // Optional uses ports the user switched to external wiring. Ports without
  // a default are always external and never appear here.
  std::set<std::string> external_ports;
  bool synthesized = false;  // connectors added by normalize_connectors

  friend bool operator==(const InstanceNode&, const InstanceNode&) = default;
};

// Client-server edge: parent's uses port served by child's provide port.
// Synthesized bindings attach connectors; their `uses` is "<connector>:put"
// or "<connector>:get" and names no declared port.
struct Binding {
  std::string parent;
  std::string uses;
  std::string child;
  std::string provide;
  bool synthesized = false;

  friend bool operator==(const Binding&, const Binding&) = default;
};

// Pipe&filter edge between siblings: an out/inout parameter of one provide
// port feeds an in parameter of another.
struct PipeEdge {
  std::string from;
  std::string from_port;
  std::string from_param;
  std::string to;
  std::string to_port;
  std::string to_param;

  friend bool operator==(const PipeEdge&, const PipeEdge&) = default;
};

// Record of a pipe lowered onto connector instance `connector`.
struct ConnectorRoute {
  std::string connector;
  PipeEdge pipe;

  friend bool operator==(const ConnectorRoute&, const ConnectorRoute&) = default;
};

struct LayoutHint {
  double x = 0;
  double y = 0;

  friend bool operator==(const LayoutHint&, const LayoutHint&) = default;
};

// A project value. Edits never mutate; they return a new Project or throw
// GraphError and leave the input untouched.
struct Project {
  SchemaId schema_id = kCoreSchema;
  std::string root;
  std::vector<InstanceNode> instances;
  std::vector<Binding> bindings;
  std::vector<PipeEdge> pipes;
  std::vector<ConnectorRoute> routes;
  std::map<std::string, LayoutHint> layout;
  std::optional<double> zoom;
  std::vector<Element> extensions;

  const InstanceNode* find_instance(std::string_view id) const;
  // Non-synthesized binding occupying (parent, uses), if any.
  const Binding* binding_for(std::string_view parent, std::string_view uses) const;
  // Id of the tree parent of `child`, if it has one.
  std::optional<std::string> parent_of(std::string_view child) const;
  const ConnectorRoute* route_for(std::string_view connector) const;

  friend bool operator==(const Project&, const Project&) = default;
};

enum class GraphErrorKind {
  DuplicateId,
  UnknownComponent,
  UnknownInstance,
  UnknownPort,
  UnknownParam,
  Incompatible,
  Cycle,
  Occupied,
  NotSiblings,
  ModeViolation,
  AlreadyFed,
  CheckboxDefault,
  CheckboxInactive,
  InvalidProject,
};

std::string_view to_string(GraphErrorKind kind);

class GraphError : public Error {
 public:
  GraphError(GraphErrorKind kind, const std::string& message,
             std::optional<CompatReport> report = std::nullopt)
      : Error(message), kind_(kind), report_(std::move(report)) {}

  GraphErrorKind kind() const { return kind_; }
  const std::optional<CompatReport>& report() const { return report_; }

 private:
  GraphErrorKind kind_;
  std::optional<CompatReport> report_;
};

// Descriptor of an instance. Connectors get one typed by their route.
std::optional<ComponentDescriptor> descriptor_of(const Project& p,
                                                 const Catalog& catalog,
                                                 const InstanceNode& instance);

// The first instance added to an empty project becomes its root.
Project add_instance(const Project& p, const Catalog& catalog,
                     const ComponentRef& component, const std::string& id);
Project bind(const Project& p, const Catalog& catalog, const Binding& b,
             const CompatPolicy& policy);
Project unbind(const Project& p, const std::string& parent, const std::string& uses);
Project pipe(const Project& p, const Catalog& catalog, const PipeEdge& e,
             const CompatPolicy& policy);
Project set_checkbox(const Project& p, const Catalog& catalog,
                     const std::string& instance, const std::string& port,
                     bool external);
Project set_layout(const Project& p, const std::string& instance, LayoutHint hint);

enum class CheckboxState { Default, External, Inactive };

// One entry per uses port in declaration order.
std::vector<std::pair<std::string, CheckboxState>> checkbox_states(
    const Project& p, const Catalog& catalog, const std::string& instance);

// Empty result means the project can run.
std::vector<Diagnostic> validate_project(const Project& p, const Catalog& catalog);

// Pre-order from the root: an instance, then the subtrees bound to its uses
// ports in declaration order. A connector follows the subtree of the
// producer it drains. Throws GraphError(InvalidProject) unless valid.
std::vector<std::string> execution_order(const Project& p, const Catalog& catalog);

// Replaces every pipe by a connector "K.<n>" bound twice to the common
// parent; n follows pipe declaration order. Identity when there are no pipes.
Project normalize_connectors(const Project& p, const Catalog& catalog);

struct ExternalBinding {
  Binding binding;
};
struct InternalDefault {
  std::string behavior;
};
struct MissingBinding {};
using EffectiveBinding = std::variant<ExternalBinding, InternalDefault, MissingBinding>;

EffectiveBinding effective_binding(const Project& p, const Catalog& catalog,
                                   const std::string& instance,
                                   const std::string& uses_port);

// One "parent uses-> child" line per binding, for diffing.
std::string tree_text(const Project& p);

}  // namespace modweave
