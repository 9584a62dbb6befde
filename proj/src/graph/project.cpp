#include "modweave/graph/project.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <tuple>

namespace modweave {

const InstanceNode* Project::find_instance(std::string_view id) const {
  for (const auto& i : instances) {
    if (i.id == id) return &i;
  }
  return nullptr;
}

const Binding* Project::binding_for(std::string_view parent,
                                    std::string_view uses) const {
  for (const auto& b : bindings) {
    if (!b.synthesized && b.parent == parent && b.uses == uses) return &b;
  }
  return nullptr;
}

std::optional<std::string> Project::parent_of(std::string_view child) const {
  for (const auto& b : bindings) {
    if (b.child == child) return b.parent;
  }
  return std::nullopt;
}

const ConnectorRoute* Project::route_for(std::string_view connector) const {
  for (const auto& r : routes) {
    if (r.connector == connector) return &r;
  }
  return nullptr;
}

std::string_view to_string(GraphErrorKind kind) {
  switch (kind) {
    case GraphErrorKind::DuplicateId:
      return "duplicate_id";
    case GraphErrorKind::UnknownComponent:
      return "unknown_component";
    case GraphErrorKind::UnknownInstance:
      return "unknown_instance";
    case GraphErrorKind::UnknownPort:
      return "unknown_port";
    case GraphErrorKind::UnknownParam:
      return "unknown_param";
    case GraphErrorKind::Incompatible:
      return "incompatible";
    case GraphErrorKind::Cycle:
      return "cycle";
    case GraphErrorKind::Occupied:
      return "occupied";
    case GraphErrorKind::NotSiblings:
      return "not_siblings";
    case GraphErrorKind::ModeViolation:
      return "mode_violation";
    case GraphErrorKind::AlreadyFed:
      return "already_fed";
    case GraphErrorKind::CheckboxDefault:
      return "checkbox_default";
    case GraphErrorKind::CheckboxInactive:
      return "checkbox_inactive";
    case GraphErrorKind::InvalidProject:
      return "invalid_project";
  }
  return "?";
}

namespace {

const CompatPolicy kValidationPolicy{.widening = true, .name_sensitivity = false};

bool is_instance_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
           c == '-';
  });
}

const InstanceNode& need_instance(const Project& p, const std::string& id) {
  const InstanceNode* node = p.find_instance(id);
  if (node == nullptr) {
    throw GraphError(GraphErrorKind::UnknownInstance, "unknown instance '" + id + "'");
  }
  return *node;
}

ComponentDescriptor need_descriptor(const Project& p, const Catalog& catalog,
                                    const InstanceNode& node) {
  auto d = descriptor_of(p, catalog, node);
  if (!d) {
    throw GraphError(GraphErrorKind::UnknownComponent,
                     "instance '" + node.id + "' uses unknown component " +
                         node.component.str());
  }
  return *d;
}

const ProvidePortSpec& need_provide(const ComponentDescriptor& d,
                                    const std::string& instance,
                                    const std::string& port) {
  const auto* p = d.find_provide(port);
  if (p == nullptr) {
    throw GraphError(GraphErrorKind::UnknownPort,
                     "instance '" + instance + "' has no provide port '" + port + "'");
  }
  return *p;
}

const UsesPortSpec& need_uses(const ComponentDescriptor& d,
                              const std::string& instance, const std::string& port) {
  const auto* u = d.find_uses(port);
  if (u == nullptr) {
    throw GraphError(GraphErrorKind::UnknownPort,
                     "instance '" + instance + "' has no uses port '" + port + "'");
  }
  return *u;
}

const ParamSpec& need_param(const PortSignature& sig, const std::string& instance,
                            const std::string& param) {
  const auto* p = sig.find_param(param);
  if (p == nullptr) {
    throw GraphError(GraphErrorKind::UnknownParam,
                     "port '" + instance + "." + sig.name + "' has no parameter '" +
                         param + "'");
  }
  return *p;
}

// Whether `ancestor` is `node` or lies on its parent chain.
bool is_ancestor_or_self(const Project& p, const std::string& ancestor,
                         std::string node) {
  for (std::size_t guard = 0; guard <= p.instances.size(); ++guard) {
    if (node == ancestor) return true;
    auto parent = p.parent_of(node);
    if (!parent) return false;
    node = *parent;
  }
  return true;  // existing cycle: treat as reachable
}

bool feeds(const PipeEdge& e, const std::string& to, const std::string& port,
           const std::string& param) {
  return e.to == to && e.to_port == port && e.to_param == param;
}

std::string pipe_text(const PipeEdge& e) {
  return e.from + "." + e.from_port + "." + e.from_param + " -> " + e.to + "." +
         e.to_port + "." + e.to_param;
}

// Checks a pipe or lowered route against the instances it references.
void check_pipe_edge(const Project& p, const Catalog& catalog, const PipeEdge& e,
                     const std::string& path, std::vector<Diagnostic>& out) {
  auto error = [&](std::string message) {
    out.push_back({Severity::Error, path, std::move(message)});
  };
  const InstanceNode* from = p.find_instance(e.from);
  const InstanceNode* to = p.find_instance(e.to);
  if (!from || !to) {
    error("pipe " + pipe_text(e) + " references a missing instance");
    return;
  }
  auto from_d = descriptor_of(p, catalog, *from);
  auto to_d = descriptor_of(p, catalog, *to);
  if (!from_d || !to_d) return;  // reported with the instance
  const auto* from_port = from_d->find_provide(e.from_port);
  const auto* to_port = to_d->find_provide(e.to_port);
  if (!from_port || !to_port) {
    error("pipe " + pipe_text(e) + " references a missing provide port");
    return;
  }
  const auto* out_param = from_port->signature.find_param(e.from_param);
  const auto* in_param = to_port->signature.find_param(e.to_param);
  if (!out_param || !in_param) {
    error("pipe " + pipe_text(e) + " references a missing parameter");
    return;
  }
  if (!is_output(out_param->mode) || in_param->mode != ParamMode::In) {
    error("pipe " + pipe_text(e) + " must run from an out/inout to an in parameter");
    return;
  }
  if (!check_pipe(*out_param, *in_param, kValidationPolicy).compatible) {
    error("pipe " + pipe_text(e) + " carries " + format_type(out_param->type) +
          " into " + format_type(in_param->type));
  }
  auto parent_from = p.parent_of(e.from);
  auto parent_to = p.parent_of(e.to);
  if (e.from == e.to || !parent_from || parent_from != parent_to) {
    error("pipe " + pipe_text(e) + " does not connect two siblings");
  }
}

}  // namespace

std::optional<ComponentDescriptor> descriptor_of(const Project& p,
                                                 const Catalog& catalog,
                                                 const InstanceNode& instance) {
  if (instance.synthesized && instance.component == kConnectorRef) {
    const ConnectorRoute* route = p.route_for(instance.id);
    if (route == nullptr) return std::nullopt;
    const InstanceNode* producer = p.find_instance(route->pipe.from);
    if (producer == nullptr) return std::nullopt;
    auto d = descriptor_of(p, catalog, *producer);
    if (!d) return std::nullopt;
    const auto* port = d->find_provide(route->pipe.from_port);
    if (!port) return std::nullopt;
    const auto* param = port->signature.find_param(route->pipe.from_param);
    if (!param) return std::nullopt;
    return connector_descriptor(param->type);
  }
  return catalog.find(instance.component);
}

Project add_instance(const Project& p, const Catalog& catalog,
                     const ComponentRef& component, const std::string& id) {
  if (!is_instance_id(id)) {
    throw GraphError(GraphErrorKind::DuplicateId, "'" + id + "' is not a valid instance id");
  }
  if (p.find_instance(id)) {
    throw GraphError(GraphErrorKind::DuplicateId, "instance id '" + id + "' is taken");
  }
  if (!catalog.find(component)) {
    throw GraphError(GraphErrorKind::UnknownComponent,
                     "unknown component " + component.str());
  }
  Project out = p;
  out.instances.push_back(InstanceNode{id, component, {}, false});
  if (out.root.empty()) out.root = id;
  return out;
}

Project bind(const Project& p, const Catalog& catalog, const Binding& b,
             const CompatPolicy& policy) {
  const InstanceNode& parent = need_instance(p, b.parent);
  const InstanceNode& child = need_instance(p, b.child);
  auto parent_d = need_descriptor(p, catalog, parent);
  auto child_d = need_descriptor(p, catalog, child);
  const UsesPortSpec& uses = need_uses(parent_d, b.parent, b.uses);
  const ProvidePortSpec& provide = need_provide(child_d, b.child, b.provide);

  if (is_ancestor_or_self(p, b.child, b.parent) || b.child == p.root) {
    throw GraphError(GraphErrorKind::Cycle, "binding " + b.parent + "." + b.uses +
                                                " -> " + b.child +
                                                " would create a cycle");
  }
  if (p.binding_for(b.parent, b.uses)) {
    throw GraphError(GraphErrorKind::Occupied,
                     "uses port " + b.parent + "." + b.uses + " is already bound");
  }
  if (auto existing = p.parent_of(b.child)) {
    throw GraphError(GraphErrorKind::Occupied,
                     "instance '" + b.child + "' already has parent '" + *existing + "'");
  }
  if (uses.default_binding && !parent.external_ports.count(b.uses)) {
    throw GraphError(GraphErrorKind::CheckboxDefault,
                     "uses port " + b.parent + "." + b.uses +
                         " uses its internal default; switch it to external first");
  }
  CompatReport report = check_binding(uses.signature, provide.signature, policy);
  if (!report.compatible) {
    throw GraphError(GraphErrorKind::Incompatible,
                     "signatures of " + b.parent + "." + b.uses + " and " + b.child +
                         "." + b.provide + " are incompatible",
                     std::move(report));
  }
  Project out = p;
  Binding added = b;
  added.synthesized = false;
  out.bindings.push_back(std::move(added));
  return out;
}

Project unbind(const Project& p, const std::string& parent, const std::string& uses) {
  const Binding* b = p.binding_for(parent, uses);
  if (b == nullptr) {
    throw GraphError(GraphErrorKind::UnknownPort,
                     "uses port " + parent + "." + uses + " is not bound");
  }
  const std::string child = b->child;
  for (const auto& e : p.pipes) {
    if (e.from == child || e.to == child) {
      throw GraphError(GraphErrorKind::Occupied,
                       "instance '" + child + "' still takes part in pipe " +
                           pipe_text(e));
    }
  }
  Project out = p;
  std::erase_if(out.bindings, [&](const Binding& x) {
    return !x.synthesized && x.parent == parent && x.uses == uses;
  });
  return out;
}

Project pipe(const Project& p, const Catalog& catalog, const PipeEdge& e,
             const CompatPolicy& policy) {
  const InstanceNode& from = need_instance(p, e.from);
  const InstanceNode& to = need_instance(p, e.to);
  auto from_d = need_descriptor(p, catalog, from);
  auto to_d = need_descriptor(p, catalog, to);
  const ParamSpec& out_param =
      need_param(need_provide(from_d, e.from, e.from_port).signature, e.from, e.from_param);
  const ParamSpec& in_param =
      need_param(need_provide(to_d, e.to, e.to_port).signature, e.to, e.to_param);

  auto parent_from = p.parent_of(e.from);
  auto parent_to = p.parent_of(e.to);
  if (e.from == e.to || !parent_from || !parent_to || *parent_from != *parent_to) {
    throw GraphError(GraphErrorKind::NotSiblings,
                     "pipe " + pipe_text(e) + " must connect two siblings");
  }
  CompatReport report;
  try {
    report = check_pipe(out_param, in_param, policy);
  } catch (const PreconditionError& err) {
    throw GraphError(GraphErrorKind::ModeViolation, err.what());
  }
  if (!report.compatible) {
    throw GraphError(GraphErrorKind::Incompatible,
                     "pipe " + pipe_text(e) + " carries " + format_type(out_param.type) +
                         " into " + format_type(in_param.type),
                     std::move(report));
  }
  for (const auto& existing : p.pipes) {
    if (feeds(existing, e.to, e.to_port, e.to_param)) {
      throw GraphError(GraphErrorKind::AlreadyFed,
                       "parameter " + e.to + "." + e.to_port + "." + e.to_param +
                           " is already fed by " + pipe_text(existing));
    }
  }
  for (const auto& r : p.routes) {
    if (feeds(r.pipe, e.to, e.to_port, e.to_param)) {
      throw GraphError(GraphErrorKind::AlreadyFed,
                       "parameter " + e.to + "." + e.to_port + "." + e.to_param +
                           " is already fed through " + r.connector);
    }
  }
  Project out = p;
  out.pipes.push_back(e);
  return out;
}

Project set_checkbox(const Project& p, const Catalog& catalog,
                     const std::string& instance, const std::string& port,
                     bool external) {
  const InstanceNode& node = need_instance(p, instance);
  auto d = need_descriptor(p, catalog, node);
  const UsesPortSpec& uses = need_uses(d, instance, port);
  if (!uses.default_binding) {
    throw GraphError(GraphErrorKind::CheckboxInactive,
                     "uses port " + instance + "." + port +
                         " has no internal default; it is always external");
  }
  if (!external && p.binding_for(instance, port)) {
    throw GraphError(GraphErrorKind::Occupied,
                     "uses port " + instance + "." + port + " is bound; unbind it first");
  }
  Project out = p;
  for (auto& i : out.instances) {
    if (i.id != instance) continue;
    if (external) {
      i.external_ports.insert(port);
    } else {
      i.external_ports.erase(port);
    }
  }
  return out;
}

Project set_layout(const Project& p, const std::string& instance, LayoutHint hint) {
  need_instance(p, instance);
  Project out = p;
  out.layout[instance] = hint;
  if (out.schema_id == kCoreSchema) out.schema_id = kLayoutSchema;
  return out;
}

std::vector<std::pair<std::string, CheckboxState>> checkbox_states(
    const Project& p, const Catalog& catalog, const std::string& instance) {
  const InstanceNode& node = need_instance(p, instance);
  auto d = need_descriptor(p, catalog, node);
  std::vector<std::pair<std::string, CheckboxState>> out;
  for (const auto& u : d.uses_ports) {
    CheckboxState s = !u.default_binding ? CheckboxState::Inactive
                      : node.external_ports.count(u.name()) ? CheckboxState::External
                                                            : CheckboxState::Default;
    out.emplace_back(u.name(), s);
  }
  return out;
}

std::vector<Diagnostic> validate_project(const Project& p, const Catalog& catalog) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string path, std::string message) {
    out.push_back({Severity::Error, std::move(path), std::move(message)});
  };

  if (p.root.empty() || !p.find_instance(p.root)) {
    error("root", "project root '" + p.root + "' is not an instance");
  }

  std::map<std::string, ComponentDescriptor> descriptors;
  std::set<std::string> seen_ids;
  for (const auto& node : p.instances) {
    std::string path = "instance[" + node.id + "]";
    if (!seen_ids.insert(node.id).second) error(path, "duplicate instance id");
    if (!is_instance_id(node.id)) error(path, "invalid instance id");
    auto d = descriptor_of(p, catalog, node);
    if (!d) {
      error(path, node.synthesized ? "connector without a valid route"
                                   : "unknown component " + node.component.str());
      continue;
    }
    for (const auto& port : node.external_ports) {
      const auto* u = d->find_uses(port);
      if (!u) {
        error(path + ".uses[" + port + "]", "checkbox set on unknown uses port");
      } else if (!u->default_binding) {
        error(path + ".uses[" + port + "]",
              "checkbox set on a port without internal default");
      }
    }
    descriptors.emplace(node.id, std::move(*d));
  }

  // Bindings.
  std::map<std::string, std::set<std::string>> parents_of;
  std::map<std::string, int> real_parent_count;
  std::set<std::pair<std::string, std::string>> occupied;
  for (std::size_t i = 0; i < p.bindings.size(); ++i) {
    const Binding& b = p.bindings[i];
    std::string path = "binding[" + std::to_string(i) + "]";
    auto parent_it = descriptors.find(b.parent);
    auto child_it = descriptors.find(b.child);
    if (!p.find_instance(b.parent) || !p.find_instance(b.child)) {
      error(path, "binding " + b.parent + "." + b.uses + " -> " + b.child +
                      " references a missing instance");
      continue;
    }
    parents_of[b.child].insert(b.parent);
    if (b.child == p.root) error(path, "the root instance cannot be bound as a child");
    if (b.synthesized) {
      const InstanceNode* child = p.find_instance(b.child);
      const ConnectorRoute* route = p.route_for(b.child);
      if (!child->synthesized || !route) {
        error(path, "synthesized binding to '" + b.child + "' without a connector route");
      } else if (b.uses != b.child + ":" + b.provide ||
                 (b.provide != "put" && b.provide != "get")) {
        error(path, "malformed synthesized binding " + b.parent + "." + b.uses);
      }
      continue;
    }
    ++real_parent_count[b.child];
    if (!occupied.insert({b.parent, b.uses}).second) {
      error(path, "uses port " + b.parent + "." + b.uses + " is bound more than once");
    }
    if (parent_it == descriptors.end() || child_it == descriptors.end()) continue;
    const auto* uses = parent_it->second.find_uses(b.uses);
    const auto* provide = child_it->second.find_provide(b.provide);
    if (!uses) {
      error(path, "instance '" + b.parent + "' has no uses port '" + b.uses + "'");
      continue;
    }
    if (!provide) {
      error(path, "instance '" + b.child + "' has no provide port '" + b.provide + "'");
      continue;
    }
    if (!check_binding(uses->signature, provide->signature, kValidationPolicy).compatible) {
      error(path, "signatures of " + b.parent + "." + b.uses + " and " + b.child + "." +
                      b.provide + " are incompatible");
    }
    const InstanceNode* parent = p.find_instance(b.parent);
    if (uses->default_binding && !parent->external_ports.count(b.uses)) {
      error(path, "uses port " + b.parent + "." + b.uses +
                      " is bound but its checkbox selects the internal default");
    }
  }

  // Tree shape: one parent per non-root instance, everything reachable.
  for (const auto& [child, parents] : parents_of) {
    if (parents.size() > 1 || real_parent_count[child] > 1) {
      error("instance[" + child + "]", "instance is reachable through several bindings");
    }
  }
  if (p.find_instance(p.root)) {
    std::set<std::string> reached{p.root};
    std::vector<std::string> frontier{p.root};
    while (!frontier.empty()) {
      std::string current = frontier.back();
      frontier.pop_back();
      for (const auto& b : p.bindings) {
        if (b.parent == current && reached.insert(b.child).second) {
          frontier.push_back(b.child);
        }
      }
    }
    for (const auto& node : p.instances) {
      if (!reached.count(node.id)) {
        error("instance[" + node.id + "]", "instance is not connected to the root");
      }
    }
  }

  // Uses ports needing external wiring.
  for (const auto& node : p.instances) {
    auto it = descriptors.find(node.id);
    if (it == descriptors.end()) continue;
    for (const auto& u : it->second.uses_ports) {
      if (p.binding_for(node.id, u.name())) continue;
      std::string path = "instance[" + node.id + "].uses[" + u.name() + "]";
      if (!u.default_binding) {
        error(path, "mandatory uses port '" + u.name() + "' of '" + node.id +
                        "' is not bound");
      } else if (node.external_ports.count(u.name())) {
        error(path, "uses port '" + u.name() + "' of '" + node.id +
                        "' is checked external but not bound");
      }
    }
  }

  // Pipes and routes.
  std::set<std::tuple<std::string, std::string, std::string>> fed;
  auto check_fed = [&](const PipeEdge& e, const std::string& path) {
    if (!fed.insert({e.to, e.to_port, e.to_param}).second) {
      error(path, "parameter " + e.to + "." + e.to_port + "." + e.to_param +
                      " is fed by more than one pipe");
    }
  };
  for (std::size_t i = 0; i < p.pipes.size(); ++i) {
    std::string path = "pipe[" + std::to_string(i) + "]";
    check_pipe_edge(p, catalog, p.pipes[i], path, out);
    check_fed(p.pipes[i], path);
  }
  for (std::size_t i = 0; i < p.routes.size(); ++i) {
    const ConnectorRoute& r = p.routes[i];
    std::string path = "route[" + std::to_string(i) + "]";
    check_pipe_edge(p, catalog, r.pipe, path, out);
    check_fed(r.pipe, path);
    const InstanceNode* k = p.find_instance(r.connector);
    if (!k || !k->synthesized) {
      error(path, "route names missing connector '" + r.connector + "'");
      continue;
    }
    auto common = p.parent_of(r.pipe.from);
    int attached = 0;
    for (const auto& b : p.bindings) {
      if (b.synthesized && b.child == r.connector && common && b.parent == *common) {
        ++attached;
      }
    }
    if (attached != 2) {
      error(path, "connector '" + r.connector +
                      "' must be bound to the pipe's parent through put and get");
    }
  }
  return out;
}

std::vector<std::string> execution_order(const Project& p, const Catalog& catalog) {
  auto problems = validate_project(p, catalog);
  if (!problems.empty()) {
    throw GraphError(GraphErrorKind::InvalidProject,
                     "project is not valid: " + format_diagnostic(problems.front()));
  }
  std::vector<std::string> order;
  std::set<std::string> visited;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    if (!visited.insert(id).second) return;
    order.push_back(id);
    const InstanceNode* node = p.find_instance(id);
    auto d = descriptor_of(p, catalog, *node);
    for (const auto& u : d->uses_ports) {
      const Binding* b = p.binding_for(id, u.name());
      if (!b) continue;
      visit(b->child);
      for (const auto& r : p.routes) {
        if (r.pipe.from == b->child && p.parent_of(r.connector) == id) {
          visit(r.connector);
        }
      }
    }
  };
  visit(p.root);
  return order;
}

Project normalize_connectors(const Project& p, const Catalog& catalog) {
  if (p.pipes.empty()) return p;
  auto problems = validate_project(p, catalog);
  if (!problems.empty()) {
    throw GraphError(GraphErrorKind::InvalidProject,
                     "project is not valid: " + format_diagnostic(problems.front()));
  }
  Project out = p;
  out.pipes.clear();
  int next = 1;
  for (const auto& e : p.pipes) {
    std::string id;
    do {
      id = "K." + std::to_string(next++);
    } while (out.find_instance(id));
    std::string parent = *p.parent_of(e.from);
    out.instances.push_back(InstanceNode{id, kConnectorRef, {}, true});
    out.bindings.push_back(Binding{parent, id + ":put", id, "put", true});
    out.bindings.push_back(Binding{parent, id + ":get", id, "get", true});
    out.routes.push_back(ConnectorRoute{id, e});
  }
  return out;
}

EffectiveBinding effective_binding(const Project& p, const Catalog& catalog,
                                   const std::string& instance,
                                   const std::string& uses_port) {
  const InstanceNode& node = need_instance(p, instance);
  auto d = need_descriptor(p, catalog, node);
  const UsesPortSpec& u = need_uses(d, instance, uses_port);
  if (const Binding* b = p.binding_for(instance, uses_port)) {
    return ExternalBinding{*b};
  }
  if (u.default_binding && !node.external_ports.count(uses_port)) {
    return InternalDefault{*u.default_binding};
  }
  return MissingBinding{};
}

std::string tree_text(const Project& p) {
  std::ostringstream out;
  for (const auto& b : p.bindings) {
    out << b.parent << ' ' << b.uses << "-> " << b.child << '\n';
  }
  return out.str();
}

}  // namespace modweave
