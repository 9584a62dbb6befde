#include "modweave/registry/stdlib.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "modweave/core/kbody.hpp"
#include "modweave/core/signature_text.hpp"

namespace modweave {

namespace {

const std::string kVersion = "1.0";

ProvidePortSpec provide(std::string_view sig, std::string doc = {}) {
  ProvidePortSpec p{parse_signature(sig)};
  p.signature.doc = std::move(doc);
  return p;
}

UsesPortSpec uses(std::string_view sig, std::string doc = {}) {
  UsesPortSpec u{parse_signature(sig), true, std::nullopt};
  u.signature.doc = std::move(doc);
  return u;
}

ComponentPackage builtin(std::string id, std::string doc, std::vector<ProvidePortSpec> provides,
                         std::vector<UsesPortSpec> uses_ports, std::string behavior) {
  ComponentPackage pkg;
  pkg.descriptor.id = std::move(id);
  pkg.descriptor.version = kVersion;
  pkg.descriptor.doc = std::move(doc);
  pkg.descriptor.provide_ports = std::move(provides);
  pkg.descriptor.uses_ports = std::move(uses_ports);
  pkg.behavior = BuiltinProvider{std::move(behavior), {}};
  return pkg;
}

std::map<ComponentRef, ComponentPackage> fixed_packages() {
  std::vector<ComponentPackage> all{
      builtin("org.modweave.demo.sum_driver", "Runs two producers, then adds their outputs.",
              {provide("run() -> int")},
              {uses("p(out v:int) -> void"), uses("q(out v:int) -> void"),
               uses("r(in a:int, in b:int) -> int")},
              "seq_driver"),
      builtin("org.modweave.demo.const2", "Produces the integer 2.",
              {provide("value(out v:int) -> void")}, {}, "const(2)"),
      builtin("org.modweave.demo.const3", "Produces the integer 3.",
              {provide("value(out v:int) -> void")}, {}, "const(3)"),
      builtin("org.modweave.demo.add", "Integer addition.",
              {provide("apply(in a:int, in b:int) -> int")}, {}, "add"),
      builtin("org.modweave.demo.fig.framework",
              "Top-level driver: initialise, solve, report.", {provide("run() -> real")},
              {uses("init() -> real", "initial state"),
               uses("solve(in x:real) -> real", "advance the state"),
               uses("report(in v:real) -> real", "publish the result")},
              "seq_driver"),
      builtin("org.modweave.demo.fig.init", "Initial state 1.5.", {provide("init() -> real")},
              {}, "const(1.5)"),
      builtin("org.modweave.demo.fig.solver", "Runs a step, then finishes from its output.",
              {provide("solve(in x:real) -> real")},
              {uses("step(in x:real, out y:real) -> void"), uses("finish(in y:real) -> real")},
              "seq_driver"),
      builtin("org.modweave.demo.fig.step", "Negates its input.",
              {provide("step(in x:real, out y:real) -> void")}, {}, "neg"),
      builtin("org.modweave.demo.fig.finish", "Passes its input through.",
              {provide("finish(in y:real) -> real")}, {}, "id"),
      builtin("org.modweave.demo.fig.report", "Sends its input to a sink and returns it.",
              {provide("report(in v:real) -> real")}, {uses("sink(in v:real) -> void")},
              "seq_driver"),
      builtin("org.modweave.demo.fig.sink", "Prints its input.",
              {provide("sink(in v:real) -> void")}, {}, "print_sink"),
  };
  std::map<ComponentRef, ComponentPackage> out;
  for (auto& pkg : all) out.emplace(pkg.descriptor.ref(), std::move(pkg));
  return out;
}

const std::map<ComponentRef, ComponentPackage>& fixed() {
  static const auto packages = fixed_packages();
  return packages;
}

const std::vector<std::pair<int, int>> kListedKbody{{3, 2}, {4, 2}, {5, 3}, {6, 3}};

ComponentRef ref(const std::string& id) { return ComponentRef{id, kVersion}; }

}  // namespace

ComponentPackage kbody_package(int n, int k) {
  ComponentPackage pkg;
  pkg.descriptor = make_kbody_component(n, k);
  BuiltinProvider b{"seq_driver", {}};
  for (const auto& u : pkg.descriptor.uses_ports) b.exports[*u.default_binding] = "neg";
  pkg.behavior = std::move(b);
  return pkg;
}

std::vector<ComponentRef> StdLibrary::list() const {
  std::vector<ComponentRef> out;
  for (const auto& [r, pkg] : fixed()) out.push_back(r);
  for (auto [n, k] : kListedKbody) out.push_back(make_kbody_component(n, k).ref());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<ComponentPackage> StdLibrary::get(const ComponentRef& r) const {
  auto it = fixed().find(r);
  if (it != fixed().end()) return it->second;
  static const std::regex kbody_id(R"(org\.modweave\.demo\.kbody\.n(\d{1,2})\.k(\d{1,2}))");
  std::smatch m;
  if (r.version == kVersion && std::regex_match(r.id, m, kbody_id)) {
    int n = std::stoi(m[1]);
    int k = std::stoi(m[2]);
    if (k >= 1 && k <= n && n <= 12) return kbody_package(n, k);
  }
  return std::nullopt;
}

const StdLibrary& std_library() {
  static const StdLibrary lib;
  return lib;
}

Project make_sum_demo_project(const Catalog& catalog) {
  CompatPolicy policy{true, false};
  Project p;
  p = add_instance(p, catalog, ref("org.modweave.demo.sum_driver"), "main");
  p = add_instance(p, catalog, ref("org.modweave.demo.const2"), "two");
  p = add_instance(p, catalog, ref("org.modweave.demo.const3"), "three");
  p = add_instance(p, catalog, ref("org.modweave.demo.add"), "adder");
  p = bind(p, catalog, Binding{"main", "p", "two", "value"}, policy);
  p = bind(p, catalog, Binding{"main", "q", "three", "value"}, policy);
  p = bind(p, catalog, Binding{"main", "r", "adder", "apply"}, policy);
  p = pipe(p, catalog, PipeEdge{"two", "value", "v", "adder", "apply", "a"}, policy);
  p = pipe(p, catalog, PipeEdge{"three", "value", "v", "adder", "apply", "b"}, policy);
  return p;
}

Project make_fig_project(const Catalog& catalog) {
  CompatPolicy policy{true, false};
  Project p;
  p = add_instance(p, catalog, ref("org.modweave.demo.fig.framework"), "C1");
  p = add_instance(p, catalog, ref("org.modweave.demo.fig.init"), "C2");
  p = add_instance(p, catalog, ref("org.modweave.demo.fig.solver"), "C3");
  p = add_instance(p, catalog, ref("org.modweave.demo.fig.step"), "C3.1");
  p = add_instance(p, catalog, ref("org.modweave.demo.fig.finish"), "C3.2");
  p = add_instance(p, catalog, ref("org.modweave.demo.fig.report"), "C4");
  p = add_instance(p, catalog, ref("org.modweave.demo.fig.sink"), "C4.1");
  p = bind(p, catalog, Binding{"C1", "init", "C2", "init"}, policy);
  p = bind(p, catalog, Binding{"C1", "solve", "C3", "solve"}, policy);
  p = bind(p, catalog, Binding{"C1", "report", "C4", "report"}, policy);
  p = bind(p, catalog, Binding{"C3", "step", "C3.1", "step"}, policy);
  p = bind(p, catalog, Binding{"C3", "finish", "C3.2", "finish"}, policy);
  p = bind(p, catalog, Binding{"C4", "sink", "C4.1", "sink"}, policy);
  p = pipe(p, catalog, PipeEdge{"C3.1", "step", "y", "C3.2", "finish", "y"}, policy);
  return p;
}

}  // namespace modweave
