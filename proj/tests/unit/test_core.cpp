#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

#include "modweave/core/descriptor.hpp"
#include "modweave/core/error.hpp"
#include "modweave/core/kbody.hpp"
#include "modweave/core/signature_text.hpp"
#include "modweave/core/value.hpp"

using namespace modweave;

namespace {

ComponentDescriptor minimal() {
  ComponentDescriptor d;
  d.id = "org.example.integrator";
  d.version = "1.0";
  d.provide_ports.push_back({parse_signature("integrate(in x:real) -> real")});
  return d;
}

}  // namespace

TEST_CASE("type grammar round trips") {
  for (const char* text : {"int", "real", "bool", "string", "void", "array(int)",
                           "array(array(real))", "record:Point", "record:P{x:real,y:real}",
                           "array(record:Cell{id:int,tags:array(string)})"}) {
    CAPTURE(text);
    CHECK(format_type(parse_type(text)) == text);
  }
  CHECK_THROWS_AS(parse_type("integer"), ParseError);
  CHECK_THROWS_AS(parse_type("array(int"), ParseError);
  CHECK_THROWS_AS(parse_type("record:"), ParseError);
}

TEST_CASE("type problems") {
  CHECK(type_problems(parse_type("array(int)")).empty());
  CHECK_FALSE(type_problems(parse_type("array(void)")).empty());
  CHECK_FALSE(type_problems(parse_type("record:R{a:int,a:real}")).empty());
}

TEST_CASE("type_shape_of") {
  CHECK(type_shape_of(Value::integer(5)) == TypeSpec::int_type());
  CHECK(type_shape_of(Value::array({Value::real(1.0), Value::real(2.0)})) ==
        TypeSpec::array_of(TypeSpec::real_type()));
  CHECK_THROWS_AS(type_shape_of(Value::array({Value::integer(1), Value::string("x")})),
                  ShapeError);
  CHECK(type_shape_of(Value()) == TypeSpec::void_type());
}

TEST_CASE("random values conform to their type and have one shape") {
  mwtest::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    TypeSpec t = mwtest::random_type(rng, 3);
    Value v = mwtest::random_value(rng, t);
    CAPTURE(format_type(t));
    CHECK(conforms(v, t));
    // An empty array has no element shape, so only check when fully populated.
    // Shapes carry no record names either.
    if (to_display(v).find("[]") == std::string::npos &&
        format_type(t).find("record") == std::string::npos) {
      CHECK(type_shape_of(v) == t);
    }
  }
}

TEST_CASE("conforms ignores record names and accepts empty arrays") {
  TypeSpec rec = parse_type("record:A{x:int}");
  CHECK(conforms(Value::record({"x"}, {Value::integer(1)}), rec));
  CHECK_FALSE(conforms(Value::record({"y"}, {Value::integer(1)}), rec));
  CHECK(conforms(Value::array({}), parse_type("array(string)")));
  CHECK_FALSE(conforms(Value::integer(1), TypeSpec::real_type()));
}

TEST_CASE("validate_descriptor") {
  SUBCASE("minimal descriptor is valid") { CHECK(validate_descriptor(minimal()).empty()); }
  SUBCASE("mandatory port with a default") {
    auto d = minimal();
    d.uses_ports.push_back({parse_signature("f(in x:real) -> real"), true, "impl"});
    auto ds = validate_descriptor(d);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].path == "uses_ports[0]");
  }
  SUBCASE("duplicate provide names") {
    auto d = minimal();
    d.provide_ports = {{parse_signature("run() -> void")}, {parse_signature("run() -> int")}};
    auto ds = validate_descriptor(d);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].message.find("run") != std::string::npos);
  }
  SUBCASE("void parameter is reported at its path") {
    auto d = minimal();
    d.uses_ports.push_back({parse_signature("f() -> real"), true, std::nullopt});
    d.uses_ports.push_back({parse_signature("g() -> real"), true, std::nullopt});
    d.uses_ports.push_back({parse_signature("h() -> real"), true, std::nullopt});
    d.uses_ports[2].signature.params.push_back({"v", TypeSpec::void_type(), ParamMode::In, ""});
    auto ds = validate_descriptor(d);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].path == "uses_ports[2].signature.params[0]");
  }
  SUBCASE("no provide port") {
    auto d = minimal();
    d.provide_ports.clear();
    CHECK(has_errors(validate_descriptor(d)));
  }
  SUBCASE("bad ids") {
    auto d = minimal();
    d.id = "single";
    CHECK(has_errors(validate_descriptor(d)));
    d = minimal();
    d.version = "1.x";
    CHECK(has_errors(validate_descriptor(d)));
  }
  SUBCASE("deterministic") {
    auto d = minimal();
    d.provide_ports.push_back(d.provide_ports[0]);
    CHECK(validate_descriptor(d) == validate_descriptor(d));
  }
}

TEST_CASE("random descriptors validate") {
  mwtest::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    auto d = mwtest::random_descriptor(rng);
    auto ds = validate_descriptor(d);
    CHECK_MESSAGE(ds.empty(), (ds.empty() ? "" : format_diagnostic(ds[0])));
  }
}

TEST_CASE("kbody port counts match Pascal's triangle and subset enumeration") {
  for (int n = 1; n <= 12; ++n) {
    for (int k = 1; k <= n; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      auto d = make_kbody_component(n, k);
      CHECK(d.uses_ports.size() == mwtest::pascal(n, k));
      CHECK(kbody_port_count(n, k) == mwtest::pascal(n, k));
      CHECK(kbody_label_sets(n, k) == mwtest::bitmask_subsets(n, k));
      CHECK(validate_descriptor(d).empty());
    }
  }
}

TEST_CASE("kbody examples") {
  CHECK(make_kbody_component(3, 2).uses_ports.size() == 3);
  CHECK(make_kbody_component(4, 2).uses_ports.size() == 6);
  auto d = make_kbody_component(5, 3);
  CHECK(d.uses_ports.size() == mwtest::bitmask_subsets(5, 3).size());
  CHECK(d.provide_ports.at(0).name() == "simulate");
  for (const auto& u : d.uses_ports) {
    CHECK_FALSE(u.mandatory);
    CHECK(u.default_binding.has_value());
  }
  CHECK(d.uses_ports[0].name() == "interaction_E1_E2_E3");
  CHECK(*d.uses_ports[0].default_binding == "default_E1_E2_E3");
}

TEST_CASE("kbody domain") {
  CHECK_THROWS_AS(make_kbody_component(2, 3), DomainError);
  CHECK_THROWS_AS(make_kbody_component(13, 2), DomainError);
  CHECK_THROWS_AS(make_kbody_component(3, 0), DomainError);
}

TEST_CASE("signature text") {
  auto sig = parse_signature("step(in x:real, out y:real) -> void");
  REQUIRE(sig.params.size() == 2);
  CHECK(sig.params[1].mode == ParamMode::Out);
  CHECK(format_signature(sig) == "step(in x:real, out y:real) -> void");
  CHECK(parse_signature("f(x:int)").return_type.is_void());
  mwtest::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    auto s = mwtest::random_signature(rng, "p");
    for (auto& p : s.params) p.doc.clear();
    s.doc.clear();
    CHECK(parse_signature(format_signature(s)) == s);
  }
  CHECK_THROWS_AS(parse_signature("f(in x:real"), ParseError);
}
