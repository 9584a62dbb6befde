#include "modweave/runtime/engine.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "modweave/runtime/behaviors.hpp"
#include "modweave/runtime/external.hpp"

namespace modweave {

std::string_view to_string(RunErrorKind kind) {
  switch (kind) {
    case RunErrorKind::InvalidProject: return "invalid-project";
    case RunErrorKind::ProviderLaunch: return "provider-launch";
    case RunErrorKind::Protocol: return "protocol";
    case RunErrorKind::ConnectorUnderflow: return "connector-underflow";
    case RunErrorKind::ConnectorOverflow: return "connector-overflow";
    case RunErrorKind::ShapeMismatch: return "shape-mismatch";
    case RunErrorKind::Timeout: return "timeout";
    case RunErrorKind::Behavior: return "behavior";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kMaxDepth = 200;

struct Channel {
  std::string id;
  PipeEdge pipe;
  bool connector = false;  // lowered: `id` is a connector instance
};

struct Outcome {
  Value ret;
  std::vector<std::pair<std::string, Value>> outs;

  const Value* out(const std::string& name) const {
    for (const auto& [n, v] : outs) {
      if (n == name) return &v;
    }
    return nullptr;
  }
};

class Engine {
 public:
  Engine(const Project& p, const Catalog& catalog, const ProviderSource& providers,
         const RunOptions& options)
      : p_(p), catalog_(catalog), providers_(providers), options_(options) {
    deadline_ = Clock::now() + options.run_timeout;
    for (const auto& r : p.routes) channels_.push_back(Channel{r.connector, r.pipe, true});
    for (std::size_t i = 0; i < p.pipes.size(); ++i) {
      channels_.push_back(Channel{"pipe." + std::to_string(i), p.pipes[i], false});
    }
    for (const auto& node : p.instances) {
      auto d = descriptor_of(p, catalog, node);
      if (!d) {
        throw RunError(RunErrorKind::InvalidProject,
                       "no descriptor for instance '" + node.id + "'");
      }
      descriptors_.emplace(node.id, std::move(*d));
      if (node.synthesized) continue;
      auto provider = providers.provider_for(node.component);
      if (!provider) {
        throw RunError(RunErrorKind::InvalidProject,
                       "no behavior provider for " + node.component.str());
      }
      check_provider(node, descriptors_.at(node.id), *provider);
      providers_by_instance_.emplace(node.id, std::move(*provider));
    }
  }

  RunTrace trace;
  std::vector<InputRecord> inputs;

  Outcome run_entry(const std::string& entry, const std::vector<Value>& args) {
    const auto& d = descriptors_.at(p_.root);
    const ProvidePortSpec* port = d.find_provide(entry);
    if (!port) {
      throw RunError(RunErrorKind::InvalidProject,
                     "root '" + p_.root + "' has no provide port '" + entry + "'");
    }
    return invoke(p_.root, port->signature, entry, false, args);
  }

  std::vector<std::string> callable_uses_ports(const std::string& instance) const {
    std::vector<std::string> out;
    for (const auto& u : descriptors_.at(instance).uses_ports) {
      auto eb = effective_binding(p_, catalog_, instance, u.name());
      if (!std::holds_alternative<MissingBinding>(eb)) out.push_back(u.name());
    }
    return out;
  }

  std::size_t free_inputs(const std::string& instance, const std::string& uses) const {
    const UsesPortSpec* u = descriptors_.at(instance).find_uses(uses);
    if (!u) return 0;
    auto eb = effective_binding(p_, catalog_, instance, uses);
    if (auto* ext = std::get_if<ExternalBinding>(&eb)) {
      const auto& b = ext->binding;
      const auto& sig = descriptors_.at(b.child).find_provide(b.provide)->signature;
      std::size_t n = 0;
      for (const auto& param : sig.params) {
        if (is_input(param.mode) && !channel_into(b.child, b.provide, param.name)) ++n;
      }
      return n;
    }
    std::size_t n = 0;
    for (const auto& param : u->signature.params) n += is_input(param.mode);
    return n;
  }

  Value call_uses(const std::string& parent, const std::string& uses,
                  std::vector<Value> free_args) {
    const UsesPortSpec* u = descriptors_.at(parent).find_uses(uses);
    if (!u) {
      throw RunError(RunErrorKind::Behavior,
                     "'" + parent + "' has no uses port '" + uses + "'");
    }
    auto eb = effective_binding(p_, catalog_, parent, uses);
    if (std::holds_alternative<MissingBinding>(eb)) {
      throw RunError(RunErrorKind::Behavior,
                     "uses port '" + uses + "' of '" + parent + "' is not bound");
    }
    Value result;
    if (auto* def = std::get_if<InternalDefault>(&eb)) {
      emit(CallEvent{parent, uses, def->behavior, true});
      result = invoke(parent, u->signature, def->behavior, true, std::move(free_args)).ret;
    } else {
      const Binding& b = std::get<ExternalBinding>(eb).binding;
      const auto& sig = descriptors_.at(b.child).find_provide(b.provide)->signature;
      std::size_t expected = free_inputs(parent, uses);
      if (free_args.size() != expected) {
        throw RunError(RunErrorKind::ShapeMismatch,
                       "uses port '" + uses + "' of '" + parent + "' takes " +
                           std::to_string(expected) + " argument(s), got " +
                           std::to_string(free_args.size()));
      }
      std::vector<Value> full;
      std::size_t next = 0;
      for (const auto& param : sig.params) {
        if (!is_input(param.mode)) continue;
        if (const Channel* c = channel_into(b.child, b.provide, param.name)) {
          full.push_back(take(parent, *c));
        } else {
          full.push_back(std::move(free_args[next++]));
        }
      }
      emit(CallEvent{parent, uses, b.child, false});
      Outcome o = invoke(b.child, sig, b.provide, false, std::move(full));
      for (const auto& c : channels_) {
        if (c.pipe.from != b.child || c.pipe.from_port != b.provide) continue;
        const Value* v = o.out(c.pipe.from_param);
        if (!v) {
          throw RunError(RunErrorKind::Behavior, "'" + b.child + "' produced no value for " +
                                                     b.provide + "." + c.pipe.from_param);
        }
        put(parent, c, *v);
      }
      result = std::move(o.ret);
    }
    return marshal(std::move(result), u->signature.return_type, parent, uses, "return");
  }

  std::ostream* sink() const { return options_.sink; }

 private:
  class Frame : public InvocationContext {
   public:
    Frame(Engine& engine, const std::string& instance, const PortSignature& signature)
        : engine_(engine), instance_(instance), signature_(signature) {}

    const std::string& instance() const override { return instance_; }
    const PortSignature& signature() const override { return signature_; }
    std::vector<std::string> callable_uses_ports() const override {
      return engine_.callable_uses_ports(instance_);
    }
    std::size_t free_inputs(const std::string& uses_port) const override {
      return engine_.free_inputs(instance_, uses_port);
    }
    Value call(const std::string& uses_port, std::vector<Value> args) override {
      return engine_.call_uses(instance_, uses_port, std::move(args));
    }
    std::ostream* sink() override { return engine_.sink(); }

   private:
    Engine& engine_;
    const std::string& instance_;
    const PortSignature& signature_;
  };

  void emit(TraceEvent e) {
    if (options_.on_event) options_.on_event(e);
    trace.events.push_back(std::move(e));
  }

  static void check_provider(const InstanceNode& node, const ComponentDescriptor& d,
                             const BehaviorProvider& provider) {
    auto invalid = [&](const std::string& why) {
      throw RunError(RunErrorKind::InvalidProject,
                     "instance '" + node.id + "' (" + node.component.str() + "): " + why);
    };
    if (auto* b = std::get_if<BuiltinProvider>(&provider)) {
      try {
        parse_behavior(b->behavior);
        for (const auto& [name, spec] : b->exports) parse_behavior(spec);
      } catch (const ParseError& e) {
        invalid(e.what());
      }
    }
    for (const auto& u : d.uses_ports) {
      if (u.default_binding && !provider_exports(provider, *u.default_binding)) {
        invalid("default '" + *u.default_binding + "' of uses port '" + u.name() +
                "' is not exported");
      }
    }
  }

  const Channel* channel_into(const std::string& to, const std::string& port,
                              const std::string& param) const {
    for (const auto& c : channels_) {
      if (c.pipe.to == to && c.pipe.to_port == port && c.pipe.to_param == param) return &c;
    }
    return nullptr;
  }

  Value take(const std::string& parent, const Channel& c) {
    if (c.connector) {
      emit(CallEvent{parent, c.id + ":get", c.id, false});
      const auto& sig = descriptors_.at(c.id).find_provide("get")->signature;
      return invoke(c.id, sig, "get", false, {}).ret;
    }
    return slot_get(c.id);
  }

  void put(const std::string& parent, const Channel& c, const Value& v) {
    if (c.connector) {
      emit(CallEvent{parent, c.id + ":put", c.id, false});
      const auto& sig = descriptors_.at(c.id).find_provide("put")->signature;
      invoke(c.id, sig, "put", false, {v});
      return;
    }
    slot_put(c.id, v);
  }

  Value slot_get(const std::string& id) {
    auto& slot = slots_[id];
    if (!slot) {
      throw RunError(RunErrorKind::ConnectorUnderflow,
                     "get on empty connector '" + id + "'");
    }
    Value v = std::move(*slot);
    slot.reset();
    emit(PipeGetEvent{id, v});
    return v;
  }

  void slot_put(const std::string& id, const Value& v) {
    auto& slot = slots_[id];
    if (slot) {
      throw RunError(RunErrorKind::ConnectorOverflow,
                     "put on full connector '" + id + "'");
    }
    slot = v;
    emit(PipePutEvent{id, v});
  }

  Value marshal(Value v, const TypeSpec& type, const std::string& instance,
                const std::string& port, const std::string& param) {
    if (conforms(v, type)) return v;
    if (v.is_int() && type.is(PrimitiveKind::Real) && options_.policy.widening) {
      emit(WidenEvent{instance, port, param});
      return Value::real(static_cast<double>(v.as_int()));
    }
    throw RunError(RunErrorKind::ShapeMismatch,
                   instance + "." + port + "." + param + " expects " + format_type(type) +
                       ", got " + to_display(v));
  }

  Outcome invoke(const std::string& instance, const PortSignature& sig,
                 const std::string& port, bool is_default, std::vector<Value> args) {
    if (Clock::now() > deadline_) {
      throw RunError(RunErrorKind::Timeout, "run exceeded " +
                                                std::to_string(options_.run_timeout.count()) +
                                                " ms");
    }
    if (depth_ >= kMaxDepth) {
      throw RunError(RunErrorKind::Behavior, "call depth limit reached at '" + instance + "'");
    }
    std::vector<const ParamSpec*> in_params;
    for (const auto& param : sig.params) {
      if (is_input(param.mode)) in_params.push_back(&param);
    }
    if (args.size() != in_params.size()) {
      throw RunError(RunErrorKind::ShapeMismatch,
                     instance + "." + port + " takes " + std::to_string(in_params.size()) +
                         " input(s), got " + std::to_string(args.size()));
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      args[i] = marshal(std::move(args[i]), in_params[i]->type, instance, port,
                        in_params[i]->name);
    }
    emit(InvokeEvent{instance, port, args});
    const InstanceNode* node = p_.find_instance(instance);
    if (!node->synthesized) inputs.push_back(InputRecord{instance, port, args});

    ++depth_;
    Outcome o;
    try {
      o = dispatch(*node, sig, port, is_default, args);
      o.ret = marshal(std::move(o.ret), sig.return_type, instance, port, "return");
      for (auto& [name, v] : o.outs) {
        v = marshal(std::move(v), sig.find_param(name)->type, instance, port, name);
      }
    } catch (const RunError& e) {
      --depth_;
      emit(ErrorEvent{instance, e.what()});
      throw;
    } catch (const std::exception& e) {
      --depth_;
      emit(ErrorEvent{instance, e.what()});
      throw RunError(RunErrorKind::Behavior, e.what());
    }
    --depth_;
    emit(ReturnEvent{instance, o.ret});
    return o;
  }

  Outcome dispatch(const InstanceNode& node, const PortSignature& sig, const std::string& port,
                   bool is_default, const std::vector<Value>& args) {
    if (node.synthesized && node.component == kConnectorRef) {
      Outcome o;
      if (port == "put") {
        slot_put(node.id, args.at(0));
      } else {
        o.ret = slot_get(node.id);
      }
      return o;
    }
    const BehaviorProvider& provider = providers_by_instance_.at(node.id);
    Outcome o;
    if (auto* builtin = std::get_if<BuiltinProvider>(&provider)) {
      BehaviorSpec spec = parse_behavior(is_default ? builtin->exports.at(port)
                                                    : builtin->behavior);
      Frame frame(*this, node.id, sig);
      Value r = invoke_builtin(spec, args, frame);
      if (!sig.return_type.is_void()) o.ret = r;
      for (const auto& param : sig.params) {
        if (!is_output(param.mode)) continue;
        if (r.is_void()) {
          throw RunError(RunErrorKind::Behavior, "behavior '" + spec.name +
                                                     "' produced no value for out parameter '" +
                                                     param.name + "'");
        }
        o.outs.emplace_back(param.name, r);
      }
      return o;
    }
    const auto& external = std::get<ExternalProvider>(provider);
    Frame frame(*this, node.id, sig);
    SessionLimits limits{options_.message_timeout, deadline_};
    SessionResult s = run_external_session(external, port, args, frame, limits);
    o.ret = std::move(s.value);
    std::size_t in_index = 0;
    for (const auto& param : sig.params) {
      std::size_t arg_index = in_index;
      if (is_input(param.mode)) ++in_index;
      if (!is_output(param.mode)) continue;
      auto it = std::find_if(s.outs.begin(), s.outs.end(),
                             [&](const auto& kv) { return kv.first == param.name; });
      if (it != s.outs.end()) {
        o.outs.emplace_back(param.name, it->second);
      } else if (param.mode == ParamMode::InOut) {
        o.outs.emplace_back(param.name, args[arg_index]);
      } else {
        throw RunError(RunErrorKind::Protocol,
                       "return lacks out parameter '" + param.name + "'");
      }
    }
    for (const auto& [name, v] : s.outs) {
      const ParamSpec* param = sig.find_param(name);
      if (!param || !is_output(param->mode)) {
        throw RunError(RunErrorKind::Protocol, "return names unknown out parameter '" + name + "'");
      }
    }
    return o;
  }

  const Project& p_;
  const Catalog& catalog_;
  const ProviderSource& providers_;
  const RunOptions& options_;
  Clock::time_point deadline_;
  std::vector<Channel> channels_;
  std::map<std::string, ComponentDescriptor> descriptors_;
  std::map<std::string, BehaviorProvider> providers_by_instance_;
  std::map<std::string, std::optional<Value>> slots_;
  int depth_ = 0;
};

}  // namespace

RunResult run_project(const Project& p, const Catalog& catalog, const ProviderSource& providers,
                      const std::string& entry, const std::vector<Value>& args,
                      const RunOptions& options) {
  RunResult result;
  auto problems = validate_project(p, catalog);
  if (!problems.empty()) {
    throw RunError(RunErrorKind::InvalidProject,
                   "project is not valid: " + format_diagnostic(problems.front()));
  }
  result.executed = options.pipe_mode == PipeMode::Lowered ? normalize_connectors(p, catalog) : p;
  Engine engine(result.executed, catalog, providers, options);
  try {
    Outcome o = engine.run_entry(entry, args);
    result.value = std::move(o.ret);
    result.outs = std::move(o.outs);
  } catch (RunError& e) {
    e.set_trace(std::move(engine.trace));
    throw;
  }
  result.trace = std::move(engine.trace);
  result.inputs = std::move(engine.inputs);
  return result;
}

}  // namespace modweave
