#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "modweave/core/kbody.hpp"
#include "modweave/core/signature_text.hpp"
#include "modweave/runtime/behaviors.hpp"
#include "modweave/runtime/engine.hpp"
#include "modweave/runtime/protocol.hpp"
#include "modweave/registry/stdlib.hpp"

using namespace modweave;

namespace {

const CompatPolicy kWiden{true, false};

ComponentDescriptor component(const std::string& id, std::vector<std::string> provides,
                              std::vector<std::string> uses = {}) {
  ComponentDescriptor d;
  d.id = id;
  d.version = "1";
  for (const auto& s : provides) d.provide_ports.push_back({parse_signature(s)});
  for (const auto& s : uses) d.uses_ports.push_back({parse_signature(s), true, std::nullopt});
  return d;
}

// Minimal context for calling builtins directly.
class FakeContext : public InvocationContext {
 public:
  explicit FakeContext(std::string sig) : sig_(parse_signature(sig)) {}
  const std::string& instance() const override { return id_; }
  const PortSignature& signature() const override { return sig_; }
  std::vector<std::string> callable_uses_ports() const override { return {}; }
  std::size_t free_inputs(const std::string&) const override { return 0; }
  Value call(const std::string&, std::vector<Value>) override { return {}; }
  std::ostream* sink() override { return &out; }

  std::ostringstream out;

 private:
  std::string id_ = "x";
  PortSignature sig_;
};

Value builtin(const std::string& spec, std::vector<Value> args,
              const std::string& sig = "f(in a:int, in b:int) -> int") {
  FakeContext ctx(sig);
  return invoke_builtin(parse_behavior(spec), args, ctx);
}

RunErrorKind run_error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const RunError& e) {
    return e.kind();
  }
  FAIL("no RunError");
  return RunErrorKind::Behavior;
}

std::string write_script(const mwtest::TempDir& dir, const std::string& name,
                         const std::string& body) {
  auto path = dir.path() / name;
  std::ofstream(path) << body;
  return std::string(MOCK_COMPONENT) + " " + path.string();
}

// One external instance X offering f(in x:int) -> int, optionally calling a
// builtin negator through uses port g.
struct ExternalWorld {
  DescriptorSet catalog;
  ProviderTable providers;
  Project project;
};

ExternalWorld external_world(const std::string& command, bool with_child) {
  ExternalWorld w;
  auto x = with_child ? component("org.t.ext", {"f(in x:int) -> int"}, {"g(in x:int) -> int"})
                      : component("org.t.ext", {"f(in x:int) -> int"});
  w.catalog.add(x);
  w.catalog.add(component("org.t.neg", {"g(in x:int) -> int"}));
  w.providers.add(x.ref(), ExternalProvider{command, "", {}});
  w.providers.add({"org.t.neg", "1"}, BuiltinProvider{"neg", {}});
  w.project = add_instance(Project{}, w.catalog, x.ref(), "X");
  if (with_child) {
    w.project = add_instance(w.project, w.catalog, {"org.t.neg", "1"}, "N");
    w.project = bind(w.project, w.catalog, Binding{"X", "g", "N", "g"}, kWiden);
  }
  return w;
}

std::vector<InputRecord> sorted(std::vector<InputRecord> v) {
  std::sort(v.begin(), v.end(), [](const InputRecord& a, const InputRecord& b) {
    return std::tie(a.instance, a.port) < std::tie(b.instance, b.port) ||
           (std::tie(a.instance, a.port) == std::tie(b.instance, b.port) &&
            encode_value(Value::array(a.args)) < encode_value(Value::array(b.args)));
  });
  return v;
}

}  // namespace

TEST_CASE("sum demo: two pipes through connectors") {
  const auto& lib = std_library();
  Project p = make_sum_demo_project(lib);
  auto r = run_project(p, lib, lib, "run", {});
  CHECK(r.value == Value::integer(5));
  std::vector<TraceEvent> pipes;
  for (const auto& e : r.trace.events) {
    if (std::holds_alternative<PipePutEvent>(e) || std::holds_alternative<PipeGetEvent>(e)) {
      pipes.push_back(e);
    }
  }
  std::vector<TraceEvent> expected{PipePutEvent{"K.1", Value::integer(2)},
                                   PipePutEvent{"K.2", Value::integer(3)},
                                   PipeGetEvent{"K.1", Value::integer(2)},
                                   PipeGetEvent{"K.2", Value::integer(3)}};
  CHECK(pipes == expected);
  CHECK(r.trace.is_balanced());
  CHECK(mwtest::nesting_ok(r.trace));
  CHECK(r.trace.first_invoke_order() == execution_order(r.executed, lib));

  auto direct = run_project(p, lib, lib, "run", {}, RunOptions{kWiden, PipeMode::Direct});
  CHECK(direct.value == Value::integer(5));
  CHECK(sorted(direct.inputs) == sorted(r.inputs));
}

TEST_CASE("framework example returns the negated initial state") {
  const auto& lib = std_library();
  std::ostringstream sink;
  RunOptions opts;
  opts.sink = &sink;
  auto r = run_project(make_fig_project(lib), lib, lib, "run", {}, opts);
  CHECK(r.value == Value::real(-1.5));
  CHECK(sink.str() == "-1.5\n");
  CHECK(r.trace.first_invoke_order() ==
        std::vector<std::string>{"C1", "C2", "C3", "C3.1", "K.1", "C3.2", "C4", "C4.1"});
  CHECK(r.trace.is_balanced());
}

TEST_CASE("kbody runs entirely on internal defaults") {
  const auto& lib = std_library();
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {5, 3}}) {
    auto d = make_kbody_component(n, k);
    Project p = add_instance(Project{}, lib, d.ref(), "sim");
    auto sig = d.provide_ports[0].signature;
    std::vector<Value> args;
    for (const auto& prm : sig.params) {
      if (prm.mode != ParamMode::Out) args.push_back(Value::real(2.0));
    }
    auto r = run_project(p, lib, lib, sig.name, args);
    CHECK(r.trace.cross_instance_calls() == 0);
    CHECK(r.trace.is_balanced());
    std::size_t internal = 0;
    for (const auto& e : r.trace.events) {
      if (auto* c = std::get_if<CallEvent>(&e)) internal += c->internal;
    }
    CHECK(internal == mwtest::pascal(n, k));
    double sign = mwtest::pascal(n, k) % 2 ? -1.0 : 1.0;
    CHECK(r.value == Value::real(2.0 * sign));
  }
}

TEST_CASE("a consumer running before its producer underflows the connector") {
  DescriptorSet cat;
  cat.add(component("org.t.drv", {"run() -> int"},
                    {"take(in y:int) -> int", "make(out y:int) -> void"}));
  cat.add(component("org.t.take", {"take(in y:int) -> int"}));
  cat.add(component("org.t.make", {"make(out y:int) -> void"}));
  ProviderTable prov;
  prov.add({"org.t.drv", "1"}, BuiltinProvider{"seq_driver", {}});
  prov.add({"org.t.take", "1"}, BuiltinProvider{"id", {}});
  prov.add({"org.t.make", "1"}, BuiltinProvider{"const(7)", {}});
  Project p;
  p = add_instance(p, cat, {"org.t.drv", "1"}, "D");
  p = add_instance(p, cat, {"org.t.take", "1"}, "T");
  p = add_instance(p, cat, {"org.t.make", "1"}, "M");
  p = bind(p, cat, {"D", "take", "T", "take"}, kWiden);
  p = bind(p, cat, {"D", "make", "M", "make"}, kWiden);
  p = pipe(p, cat, {"M", "make", "y", "T", "take", "y"}, kWiden);
  try {
    run_project(p, cat, prov, "run", {});
    FAIL("expected underflow");
  } catch (const RunError& e) {
    CHECK(e.kind() == RunErrorKind::ConnectorUnderflow);
    CHECK(std::string(e.what()).find("K.1") != std::string::npos);
    CHECK(mwtest::nesting_ok(e.trace()));
  }
  CHECK(run_error_kind([&] {
          run_project(p, cat, prov, "run", {}, RunOptions{kWiden, PipeMode::Direct});
        }) == RunErrorKind::ConnectorUnderflow);
}

TEST_CASE("invalid projects do not start") {
  const auto& lib = std_library();
  Project p = unbind(unbind(make_fig_project(lib), "C4", "sink"), "C1", "report");
  CHECK(run_error_kind([&] { run_project(p, lib, lib, "run", {}); }) ==
        RunErrorKind::InvalidProject);
}

TEST_CASE("builtins") {
  CHECK(builtin("add", {Value::integer(2), Value::integer(3)}) == Value::integer(5));
  CHECK(builtin("add", {Value::integer(2), Value::real(0.5)}) == Value::real(2.5));
  CHECK(builtin("mul", {Value::integer(-4), Value::integer(3)}) == Value::integer(-12));
  CHECK(builtin("compare", {Value::string("a"), Value::string("b")}) == Value::integer(-1));
  CHECK(builtin("compare", {Value::real(2), Value::integer(2)}) == Value::integer(0));
  CHECK(builtin("const(2.5)", {}) == Value::real(2.5));
  CHECK(builtin("const(\"hi\")", {}) == Value::string("hi"));
  CHECK(run_error_kind([] {
          builtin("add", {Value::integer(std::numeric_limits<std::int64_t>::max()),
                          Value::integer(1)});
        }) == RunErrorKind::Behavior);
  CHECK(run_error_kind([] { builtin("add", {Value::integer(1)}); }) == RunErrorKind::Behavior);
  CHECK(run_error_kind([] {
          builtin("neg", {Value::integer(std::numeric_limits<std::int64_t>::min())});
        }) == RunErrorKind::Behavior);
  CHECK_THROWS_AS(parse_behavior("teleport"), ParseError);
  CHECK_THROWS_AS(parse_behavior("const"), ParseError);
  CHECK_THROWS_AS(parse_behavior("neg(1)"), ParseError);
  CHECK(format_behavior(parse_behavior("const(-3)")) == "const(-3)");

  FakeContext sink_ctx("sink(in a:int, in b:string) -> void");
  invoke_builtin(parse_behavior("print_sink"), {Value::integer(1), Value::string("x")}, sink_ctx);
  CHECK(sink_ctx.out.str() == "1 \"x\"\n");

  FakeContext driver("run() -> void");
  CHECK(invoke_builtin(parse_behavior("seq_driver"), {}, driver).is_void());

  mwtest::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto v = Value::integer(mwtest::pick(rng, -1000000, 1000000));
    CHECK(builtin("neg", {builtin("neg", {v}, "f(in x:int) -> int")}, "f(in x:int) -> int") == v);
  }
}

TEST_CASE("protocol encoding") {
  using namespace protocol;
  CHECK(encode(Invoke{"f", {Value::integer(42)}}) ==
        R"({"op":"invoke","port":"f","args":[{"t":"int","v":42}]})");
  CHECK(encode(Return{Value(), {}}) == R"({"op":"return","value":{"t":"void","v":null}})");
  mwtest::Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    auto t = mwtest::random_type(rng);
    std::vector<Value> args{mwtest::random_value(rng, t)};
    std::vector<Message> msgs{Invoke{"p", args}, Call{"q", args}, Result{args[0]},
                              Return{args[0], {{"y", args[0]}}}, protocol::Error{"boom"}};
    for (const auto& m : msgs) CHECK(decode(encode(m)) == m);
  }
  // Arbitrary bytes only ever raise ProtocolError.
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 2000; ++i) {
    std::string line = encode(Invoke{"f", {Value::integer(i)}});
    int flips = mwtest::pick(rng, 1, 4);
    for (int f = 0; f < flips; ++f) {
      line[mwtest::pick(rng, 0, int(line.size()) - 1)] = char(byte(rng));
    }
    try {
      decode(line);
    } catch (const ProtocolError&) {
    }
  }
  CHECK_THROWS_AS(decode("{\"op\":\"dance\"}"), ProtocolError);
  CHECK_THROWS_AS(decode("[]"), ProtocolError);
}

TEST_CASE("external components over the line protocol") {
  mwtest::TempDir dir;
  SUBCASE("immediate return") {
    auto w = external_world(
        write_script(dir, "ret.txt", "recv\nsend {\"op\":\"return\",\"value\":{\"t\":\"int\",\"v\":42}}\n"),
        false);
    auto r = run_project(w.project, w.catalog, w.providers, "f", {Value::integer(1)});
    CHECK(r.value == Value::integer(42));
    std::vector<TraceEvent> golden{InvokeEvent{"X", "f", {Value::integer(1)}},
                                   ReturnEvent{"X", Value::integer(42)}};
    CHECK(r.trace.events == golden);
  }
  SUBCASE("call back into the engine") {
    auto w = external_world(
        write_script(dir, "call.txt",
                     "recv\nsend {\"op\":\"call\",\"port\":\"g\",\"args\":[{\"t\":\"int\",\"v\":5}]}\n"
                     "recv\nreturn_result\n"),
        true);
    auto r = run_project(w.project, w.catalog, w.providers, "f", {Value::integer(1)});
    CHECK(r.value == Value::integer(-5));
    std::vector<TraceEvent> golden{InvokeEvent{"X", "f", {Value::integer(1)}},
                                   CallEvent{"X", "g", "N", false},
                                   InvokeEvent{"N", "g", {Value::integer(5)}},
                                   ReturnEvent{"N", Value::integer(-5)},
                                   ReturnEvent{"X", Value::integer(-5)}};
    CHECK(r.trace.events == golden);
  }
  SUBCASE("garbage line") {
    auto w = external_world(write_script(dir, "g.txt", "recv\ngarbage\n"), false);
    try {
      run_project(w.project, w.catalog, w.providers, "f", {Value::integer(1)});
      FAIL("expected protocol error");
    } catch (const RunError& e) {
      CHECK(e.kind() == RunErrorKind::Protocol);
      REQUIRE(e.trace().events.size() == 2);
      CHECK(std::holds_alternative<ErrorEvent>(e.trace().events[1]));
    }
  }
  SUBCASE("premature exit") {
    auto w = external_world(write_script(dir, "x.txt", "recv\nexit 0\n"), false);
    CHECK(run_error_kind([&] {
            run_project(w.project, w.catalog, w.providers, "f", {Value::integer(1)});
          }) == RunErrorKind::Protocol);
  }
  SUBCASE("missing program") {
    auto w = external_world(dir.path().string() + "/no-such-program", false);
    CHECK(run_error_kind([&] {
            run_project(w.project, w.catalog, w.providers, "f", {Value::integer(1)});
          }) == RunErrorKind::ProviderLaunch);
  }
  SUBCASE("child error message") {
    auto w = external_world(
        write_script(dir, "e.txt", "recv\nsend {\"op\":\"error\",\"message\":\"nope\"}\n"), false);
    CHECK(run_error_kind([&] {
            run_project(w.project, w.catalog, w.providers, "f", {Value::integer(1)});
          }) == RunErrorKind::Behavior);
  }
  SUBCASE("silent child times out") {
    auto w = external_world(write_script(dir, "s.txt", "recv\nsleep 3000\n"), false);
    RunOptions opts;
    opts.message_timeout = std::chrono::milliseconds(200);
    auto start = std::chrono::steady_clock::now();
    CHECK(run_error_kind([&] {
            run_project(w.project, w.catalog, w.providers, "f", {Value::integer(1)}, opts);
          }) == RunErrorKind::Timeout);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(2));
  }
}

TEST_CASE("int arguments widen into real parameters") {
  DescriptorSet cat;
  cat.add(component("org.t.drv", {"run() -> real"}, {"h(in x:real) -> real", "c() -> int"}));
  cat.add(component("org.t.half", {"h(in x:real) -> real"}));
  cat.add(component("org.t.c", {"c() -> int"}));
  ProviderTable prov;
  prov.add({"org.t.drv", "1"}, BuiltinProvider{"seq_driver", {}});
  prov.add({"org.t.half", "1"}, BuiltinProvider{"neg", {}});
  prov.add({"org.t.c", "1"}, BuiltinProvider{"const(4)", {}});
  Project p;
  p = add_instance(p, cat, {"org.t.drv", "1"}, "D");
  p = add_instance(p, cat, {"org.t.half", "1"}, "H");
  p = add_instance(p, cat, {"org.t.c", "1"}, "C");
  p = bind(p, cat, {"D", "h", "H", "h"}, kWiden);
  p = bind(p, cat, {"D", "c", "C", "c"}, kWiden);
  // seq_driver: h has no carry yet, so it is called first with none.
  CHECK(run_error_kind([&] { run_project(p, cat, prov, "run", {}); }) ==
        RunErrorKind::Behavior);

  DescriptorSet cat2;
  cat2.add(component("org.t.drv", {"run(in x:int) -> real"}, {"h(in x:real) -> real"}));
  cat2.add(component("org.t.half", {"h(in x:real) -> real"}));
  Project q;
  q = add_instance(q, cat2, {"org.t.drv", "1"}, "D");
  q = add_instance(q, cat2, {"org.t.half", "1"}, "H");
  q = bind(q, cat2, {"D", "h", "H", "h"}, kWiden);
  auto r = run_project(q, cat2, prov, "run", {Value::integer(4)});
  CHECK(r.value == Value::real(-4.0));
  bool widened = std::any_of(r.trace.events.begin(), r.trace.events.end(), [](const auto& e) {
    auto* w = std::get_if<WidenEvent>(&e);
    return w && w->instance == "H" && w->param == "x";
  });
  CHECK(widened);
  RunOptions strict;
  strict.policy = CompatPolicy{false, false};
  CHECK(run_error_kind([&] { run_project(q, cat2, prov, "run", {Value::integer(4)}, strict); }) ==
        RunErrorKind::ShapeMismatch);
}

TEST_CASE("lowered and direct pipe execution agree on random worlds") {
  mwtest::Rng rng(2024);
  int with_pipes = 0;
  for (int i = 0; i < 100; ++i) {
    auto w = mwtest::random_builtin_world(rng);
    with_pipes += !w.project.pipes.empty();
    std::optional<RunResult> lowered, direct;
    std::string lowered_error, direct_error;
    try {
      lowered = run_project(w.project, w.catalog, w.providers, w.entry, w.args);
    } catch (const RunError& e) {
      lowered_error = std::string(to_string(e.kind()));
    }
    try {
      direct = run_project(w.project, w.catalog, w.providers, w.entry, w.args,
                           RunOptions{kWiden, PipeMode::Direct});
    } catch (const RunError& e) {
      direct_error = std::string(to_string(e.kind()));
    }
    REQUIRE(lowered.has_value() == direct.has_value());
    CHECK(lowered_error == direct_error);
    if (!lowered) continue;
    CHECK(lowered->value == direct->value);
    CHECK(sorted(lowered->inputs) == sorted(direct->inputs));
    CHECK(lowered->trace.is_balanced());
    CHECK(direct->trace.is_balanced());
    CHECK(lowered->trace.first_invoke_order() == execution_order(lowered->executed, w.catalog));
    // Runs are deterministic.
    auto again = run_project(w.project, w.catalog, w.providers, w.entry, w.args);
    CHECK(again.trace == lowered->trace);
  }
  CHECK(with_pipes > 30);
}

TEST_CASE("trace files round trip") {
  const auto& lib = std_library();
  auto r = run_project(make_fig_project(lib), lib, lib, "run", {});
  CHECK(read_trace(write_trace(r.trace)) == r.trace);
  CHECK(encode_event(InvokeEvent{"C1", "run", {}}) ==
        R"({"ev":"invoke","instance":"C1","port":"run","args":[]})");
}
