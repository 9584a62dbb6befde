#include "generators.hpp"

#include <algorithm>
#include <cmath>

namespace mwtest {

using namespace modweave;

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

const std::vector<std::string> kWords{"flux", "grid", "a&b", "<tag>", "\"quoted\"", "it's",
                                      "énergie", "Δt", "solver", "mesh", "x>y"};

std::string random_doc(Rng& rng) {
  if (chance(rng, 0.3)) return "";
  std::string out;
  int n = pick(rng, 1, 5);
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += kWords[pick(rng, 0, int(kWords.size()) - 1)];
  }
  return out;
}

std::string ident(Rng& rng, const char* prefix) {
  return std::string(prefix) + std::to_string(pick(rng, 0, 99));
}

double random_double(Rng& rng) {
  switch (pick(rng, 0, 3)) {
    case 0: return pick(rng, -500, 500);
    case 1: return std::uniform_real_distribution<double>(-1e3, 1e3)(rng);
    case 2: return std::ldexp(std::uniform_real_distribution<double>(0.5, 1)(rng), pick(rng, -60, 60));
    default: return pick(rng, -50, 50) / 4.0;
  }
}

}  // namespace

TypeSpec random_type(Rng& rng, int depth) {
  int roll = pick(rng, 0, depth > 0 ? 5 : 3);
  switch (roll) {
    case 0: return TypeSpec::int_type();
    case 1: return TypeSpec::real_type();
    case 2: return TypeSpec::bool_type();
    case 3: return TypeSpec::string_type();
    case 4: return TypeSpec::array_of(random_type(rng, depth - 1));
    default: {
      std::vector<TypeSpec::Field> fields;
      int n = pick(rng, 1, 3);
      for (int i = 0; i < n; ++i) {
        fields.push_back({"f" + std::to_string(i), random_type(rng, depth - 1)});
      }
      return TypeSpec::record("R" + std::to_string(pick(rng, 0, 9)), std::move(fields));
    }
  }
}

Value random_value(Rng& rng, const TypeSpec& type) {
  switch (type.kind()) {
    case TypeSpec::Kind::Array: {
      Value::Array items;
      int n = pick(rng, 0, 3);
      for (int i = 0; i < n; ++i) items.push_back(random_value(rng, type.element()));
      return Value::array(std::move(items));
    }
    case TypeSpec::Kind::Record: {
      std::vector<std::string> names;
      Value::Array values;
      for (const auto& f : type.fields()) {
        names.push_back(f.name);
        values.push_back(random_value(rng, f.type));
      }
      return Value::record(std::move(names), std::move(values));
    }
    case TypeSpec::Kind::Primitive:
      break;
  }
  switch (type.primitive()) {
    case PrimitiveKind::Int: return Value::integer(pick(rng, -1000000, 1000000));
    case PrimitiveKind::Real: return Value::real(random_double(rng));
    case PrimitiveKind::Bool: return Value::boolean(chance(rng, 0.5));
    case PrimitiveKind::String: return Value::string(random_doc(rng));
    case PrimitiveKind::Void: return Value();
  }
  return Value();
}

PortSignature random_signature(Rng& rng, const std::string& name, int max_params) {
  PortSignature sig;
  sig.name = name;
  int n = pick(rng, 0, max_params);
  for (int i = 0; i < n; ++i) {
    ParamMode mode = static_cast<ParamMode>(pick(rng, 0, 2));
    sig.params.push_back(ParamSpec{"a" + std::to_string(i), random_type(rng), mode, random_doc(rng)});
  }
  sig.return_type = chance(rng, 0.3) ? TypeSpec::void_type() : random_type(rng);
  sig.doc = random_doc(rng);
  return sig;
}

ComponentDescriptor random_descriptor(Rng& rng) {
  ComponentDescriptor d;
  d.id = "org.gen." + ident(rng, "c") + "." + ident(rng, "m");
  d.version = std::to_string(pick(rng, 0, 9)) + "." + std::to_string(pick(rng, 0, 20));
  if (chance(rng, 0.5)) d.version += "." + std::to_string(pick(rng, 0, 5));
  d.doc = random_doc(rng);
  int provides = pick(rng, 1, 3);
  for (int i = 0; i < provides; ++i) {
    d.provide_ports.push_back(ProvidePortSpec{random_signature(rng, "p" + std::to_string(i))});
  }
  int uses = pick(rng, 0, 4);
  for (int i = 0; i < uses; ++i) {
    UsesPortSpec u{random_signature(rng, "u" + std::to_string(i)), true, std::nullopt};
    if (chance(rng, 0.5)) {
      u.mandatory = false;
      u.default_binding = "impl_" + std::to_string(i);
    }
    d.uses_ports.push_back(std::move(u));
  }
  if (chance(rng, 0.3)) d.skin_ref = "skin." + ident(rng, "s");
  return d;
}

Project random_project(Rng& rng) {
  Project p;
  p.schema_id = chance(rng, 0.5) ? kLayoutSchema : kCoreSchema;
  int n = pick(rng, 1, 12);
  for (int i = 0; i < n; ++i) {
    InstanceNode node;
    node.id = "C" + std::to_string(i + 1);
    if (chance(rng, 0.3)) node.id += "." + std::to_string(pick(rng, 1, 4));
    bool duplicate = false;
    for (const auto& other : p.instances) duplicate |= other.id == node.id;
    if (duplicate) continue;
    node.component = ComponentRef{"org.gen." + ident(rng, "c"), std::to_string(pick(rng, 1, 3)) + ".0"};
    int checks = pick(rng, 0, 2);
    for (int c = 0; c < checks; ++c) node.external_ports.insert(ident(rng, "u"));
    node.synthesized = chance(rng, 0.1);
    p.instances.push_back(std::move(node));
  }
  p.root = p.instances.front().id;
  auto any_id = [&] { return p.instances[pick(rng, 0, int(p.instances.size()) - 1)].id; };
  int bindings = pick(rng, 0, 8);
  for (int i = 0; i < bindings; ++i) {
    p.bindings.push_back(Binding{any_id(), ident(rng, "u"), any_id(), ident(rng, "p"), chance(rng, 0.1)});
  }
  auto edge = [&] {
    return PipeEdge{any_id(), ident(rng, "p"), ident(rng, "a"), any_id(), ident(rng, "p"), ident(rng, "a")};
  };
  int pipes = pick(rng, 0, 4);
  for (int i = 0; i < pipes; ++i) p.pipes.push_back(edge());
  int routes = pick(rng, 0, 2);
  for (int i = 0; i < routes; ++i) p.routes.push_back(ConnectorRoute{"K." + std::to_string(i + 1), edge()});
  if (p.schema_id == kLayoutSchema) {
    for (const auto& node : p.instances) {
      if (chance(rng, 0.7)) p.layout[node.id] = LayoutHint{random_double(rng), random_double(rng)};
    }
    if (chance(rng, 0.5)) p.zoom = std::uniform_real_distribution<double>(0.1, 4)(rng);
  }
  return p;
}

namespace {

// Builds one random subtree. Each node gets its own single-use component.
class WorldBuilder {
 public:
  WorldBuilder(Rng& rng, BuiltinWorld& w, int max_instances, int max_pipes)
      : rng_(rng), w_(w), budget_(max_instances - 1), pipes_left_(max_pipes) {}

  void build() {
    w_.entry = "run";
    std::string root = next_id();
    make_driver(root, "run", 0);
    w_.project.root = root;
    w_.args = {Value::integer(pick(rng_, -3, 3))};
  }

 private:
  enum class Leaf { Const, Unary, Producer, Consumer, Driver };

  std::string next_id() { return "N" + std::to_string(++counter_); }

  ComponentRef add_component(const std::string& id, ComponentDescriptor d, BuiltinProvider b) {
    d.id = "org.rand." + id;
    d.version = "1.0";
    w_.catalog.add(d);
    w_.providers.add(d.ref(), std::move(b));
    w_.project.instances.push_back(InstanceNode{id, d.ref(), {}, false});
    return d.ref();
  }

  static ParamSpec in_int(const std::string& n) { return ParamSpec{n, TypeSpec::int_type(), ParamMode::In, ""}; }
  static ParamSpec out_int(const std::string& n) { return ParamSpec{n, TypeSpec::int_type(), ParamMode::Out, ""}; }

  std::string constant() { return "const(" + std::to_string(pick(rng_, -3, 3)) + ")"; }

  // A seq_driver `port(in x:int) -> int` whose children are generated here.
  void make_driver(const std::string& id, const std::string& port, int depth) {
    ComponentDescriptor d;
    d.provide_ports.push_back(ProvidePortSpec{PortSignature{port, {in_int("x")}, TypeSpec::int_type(), ""}});
    struct Child {
      std::string id;
      PortSignature sig;
      std::vector<std::string> fed;  // pipe-fed params
    };
    std::vector<Child> children;
    std::vector<std::pair<std::string, std::string>> producers;  // (instance, port)
    BuiltinProvider behavior{"seq_driver", {}};
    int slots = pick(rng_, 2, 5);
    for (int s = 0; s < slots && budget_ > 0; ++s) {
      if (chance(rng_, 0.15)) {
        // Optional port left on its internal default.
        std::string name = "d" + std::to_string(s);
        d.uses_ports.push_back(UsesPortSpec{PortSignature{name, {in_int("x")}, TypeSpec::int_type(), ""},
                                            false, "impl_" + name});
        behavior.exports["impl_" + name] = chance(rng_, 0.5) ? "neg" : "id";
        continue;
      }
      Leaf kind = static_cast<Leaf>(pick(rng_, 0, depth < 3 ? 4 : 3));
      // Lean towards producer/consumer pairs so most worlds carry pipes.
      if (producers.empty() && pipes_left_ > 0 && chance(rng_, 0.4)) kind = Leaf::Producer;
      if (!producers.empty() && pipes_left_ > 0 && chance(rng_, 0.4)) kind = Leaf::Consumer;
      if (kind == Leaf::Consumer && (producers.empty() || pipes_left_ == 0)) kind = Leaf::Unary;
      --budget_;
      std::string cid = next_id();
      std::string uport = "u" + std::to_string(s);
      Child child{cid, {}, {}};
      switch (kind) {
        case Leaf::Const: {
          child.sig = PortSignature{"get", {}, TypeSpec::int_type(), ""};
          leaf(cid, child.sig, constant());
          break;
        }
        case Leaf::Unary: {
          child.sig = PortSignature{"f", {in_int("x")}, TypeSpec::int_type(), ""};
          leaf(cid, child.sig, chance(rng_, 0.5) ? "neg" : "id");
          break;
        }
        case Leaf::Producer: {
          if (chance(rng_, 0.5)) {
            child.sig = PortSignature{"make", {out_int("y")}, TypeSpec::void_type(), ""};
            leaf(cid, child.sig, constant());
          } else {
            child.sig = PortSignature{"make", {in_int("x"), out_int("y")}, TypeSpec::void_type(), ""};
            leaf(cid, child.sig, chance(rng_, 0.5) ? "neg" : "id");
          }
          producers.emplace_back(cid, "make");
          break;
        }
        case Leaf::Consumer: {
          bool binary = chance(rng_, 0.6);
          if (binary) {
            child.sig = PortSignature{"take", {in_int("a"), in_int("b")}, TypeSpec::int_type(), ""};
            leaf(cid, child.sig, chance(rng_, 0.8) ? "add" : "mul");
            child.fed.push_back("b");
            if (pipes_left_ > 1 && chance(rng_, 0.3)) child.fed.push_back("a");
          } else {
            child.sig = PortSignature{"take", {in_int("a")}, TypeSpec::int_type(), ""};
            leaf(cid, child.sig, chance(rng_, 0.5) ? "neg" : "id");
            child.fed.push_back("a");
          }
          for (const auto& param : child.fed) {
            auto& [from, from_port] = producers[pick(rng_, 0, int(producers.size()) - 1)];
            w_.project.pipes.push_back(PipeEdge{from, from_port, "y", cid, "take", param});
            --pipes_left_;
          }
          break;
        }
        case Leaf::Driver: {
          child.sig = PortSignature{"go", {in_int("x")}, TypeSpec::int_type(), ""};
          make_driver(cid, "go", depth + 1);
          break;
        }
      }
      PortSignature usig = child.sig;
      usig.name = uport;
      d.uses_ports.push_back(UsesPortSpec{usig, true, std::nullopt});
      w_.project.bindings.push_back(Binding{id, uport, cid, child.sig.name, false});
    }
    // The driver is registered after its children, but instance order in
    // the project does not affect execution.
    add_component(id, std::move(d), std::move(behavior));
  }

  void leaf(const std::string& id, const PortSignature& sig, const std::string& behavior) {
    ComponentDescriptor d;
    d.provide_ports.push_back(ProvidePortSpec{sig});
    add_component(id, std::move(d), BuiltinProvider{behavior, {}});
  }

  Rng& rng_;
  BuiltinWorld& w_;
  int budget_;
  int pipes_left_;
  int counter_ = 0;
};

}  // namespace

BuiltinWorld random_builtin_world(Rng& rng, int max_instances, int max_pipes) {
  BuiltinWorld w;
  WorldBuilder(rng, w, max_instances, max_pipes).build();
  // Root first: the project file convention, and what add_instance does.
  std::stable_partition(w.project.instances.begin(), w.project.instances.end(),
                        [&](const InstanceNode& n) { return n.id == w.project.root; });
  return w;
}

}  // namespace mwtest
