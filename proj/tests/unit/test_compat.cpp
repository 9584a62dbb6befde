#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <tuple>

#include "modweave/compat/compat.hpp"
#include "modweave/core/error.hpp"
#include "modweave/core/signature_text.hpp"

using namespace modweave;

namespace {

const CompatPolicy kStrict{false, false};
const CompatPolicy kWiden{true, false};

// Signatures drawn from a small pool so pairs often agree.
PortSignature pooled_signature(mwtest::Rng& rng) {
  static const std::vector<TypeSpec> types{TypeSpec::int_type(), TypeSpec::real_type(),
                                           TypeSpec::string_type(),
                                           TypeSpec::array_of(TypeSpec::int_type()),
                                           TypeSpec::array_of(TypeSpec::real_type())};
  PortSignature s;
  s.name = "p" + std::to_string(mwtest::pick(rng, 0, 3));
  int n = mwtest::pick(rng, 0, 3);
  for (int i = 0; i < n; ++i) {
    s.params.push_back(ParamSpec{mwtest::chance(rng, 0.7) ? "x" + std::to_string(i) : "y",
                                 types[mwtest::pick(rng, 0, 2 + 2 * mwtest::chance(rng, 0.2))],
                                 static_cast<ParamMode>(mwtest::pick(rng, 0, 2) * mwtest::chance(rng, 0.4)),
                                 ""});
  }
  s.return_type = mwtest::chance(rng, 0.2) ? TypeSpec::void_type() : types[mwtest::pick(rng, 0, 2)];
  return s;
}

}  // namespace

TEST_CASE("identical signatures are compatible with every entry ok") {
  auto s = parse_signature("f(in a:real, out b:int, inout c:array(string)) -> real");
  for (auto policy : {kStrict, kWiden, CompatPolicy{true, true}}) {
    auto r = check_binding(s, s, policy);
    CHECK(r.compatible);
    CHECK(r.arguments.size() == 3);
    for (const auto& e : r.arguments) CHECK(e.status == EntryStatus::Ok);
  }
}

TEST_CASE("arity mismatch lists the missing position") {
  auto r = check_binding(parse_signature("f(in a:real, in b:real) -> real"),
                         parse_signature("g(in a:real) -> real"), kWiden);
  CHECK_FALSE(r.compatible);
  REQUIRE(r.arity);
  CHECK_FALSE(r.arity->ok);
  REQUIRE(r.arguments.size() == 2);
  CHECK(r.arguments[0].status == EntryStatus::Ok);
  CHECK(r.arguments[1].status == EntryStatus::Missing);
  CHECK(r.arguments[1].position == 1);
}

TEST_CASE("widening") {
  auto req = parse_signature("f(in a:real) -> real");
  auto off = parse_signature("f(in a:int) -> int");
  auto widened = check_binding(req, off, kWiden);
  CHECK(widened.compatible);
  CHECK(widened.arguments[0].status == EntryStatus::Widened);
  CHECK(widened.return_entry->status == EntryStatus::Widened);
  CHECK_FALSE(check_binding(req, off, kStrict).compatible);
  CHECK_FALSE(check_binding(off, req, kWiden).compatible);
}

TEST_CASE("name sensitivity") {
  auto a = parse_signature("f(in a:int) -> void");
  auto b = parse_signature("f(in b:int) -> void");
  CHECK(check_binding(a, b, kStrict).compatible);
  auto r = check_binding(a, b, CompatPolicy{false, true});
  CHECK_FALSE(r.compatible);
  CHECK(r.arguments[0].status == EntryStatus::NameMismatch);
}

TEST_CASE("check_pipe") {
  ParamSpec out_real{"y", TypeSpec::real_type(), ParamMode::Out, ""};
  ParamSpec in_real{"x", TypeSpec::real_type(), ParamMode::In, ""};
  ParamSpec out_int{"y", TypeSpec::int_type(), ParamMode::Out, ""};
  ParamSpec out_ai{"y", parse_type("array(int)"), ParamMode::Out, ""};
  ParamSpec in_ar{"x", parse_type("array(real)"), ParamMode::In, ""};
  ParamSpec inout{"z", TypeSpec::real_type(), ParamMode::InOut, ""};
  CHECK(check_pipe(out_real, in_real, kWiden).compatible);
  CHECK_FALSE(check_pipe(out_ai, in_ar, kWiden).compatible);
  CHECK(check_pipe(out_int, in_real, kWiden).compatible);
  CHECK_FALSE(check_pipe(out_int, in_real, kStrict).compatible);
  CHECK(check_pipe(inout, in_real, kStrict).compatible);
  CHECK_THROWS_AS(check_pipe(in_real, in_real, kWiden), PreconditionError);
  CHECK_THROWS_AS(check_pipe(inout, inout, kWiden), PreconditionError);
  CHECK(check_pipe(out_real, in_real, kWiden).arguments.size() == 1);
}

TEST_CASE("check_binding agrees with the positional comparator") {
  mwtest::Rng rng(1234);
  for (int i = 0; i < 2000; ++i) {
    auto req = pooled_signature(rng);
    auto off = mwtest::chance(rng, 0.3) ? req : pooled_signature(rng);
    CompatPolicy policy{mwtest::chance(rng, 0.5), mwtest::chance(rng, 0.3)};
    std::vector<EntryStatus> expected;
    EntryStatus ret;
    bool verdict = mwtest::brute_compat(req, off, policy, &expected, &ret);
    auto r = check_binding(req, off, policy);
    CHECK(r.compatible == verdict);
    REQUIRE(r.arguments.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      CHECK(r.arguments[k].position == k);
      CHECK(r.arguments[k].status == expected[k]);
    }
    CHECK(r.return_entry->status == ret);
  }
}

TEST_CASE("reflexivity, monotonicity and completeness on random signatures") {
  mwtest::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    auto a = mwtest::random_signature(rng, "a");
    auto b = mwtest::chance(rng, 0.5) ? pooled_signature(rng) : mwtest::random_signature(rng, "b");
    CHECK(check_binding(a, a, kStrict).compatible);
    CHECK(check_binding(a, a, CompatPolicy{true, true}).compatible);
    if (check_binding(a, b, kStrict).compatible) CHECK(check_binding(a, b, kWiden).compatible);
    CHECK(check_binding(a, b, kWiden).arguments.size() ==
          std::max(a.params.size(), b.params.size()));
  }
}

TEST_CASE("suggest_matches") {
  auto req = parse_signature("integrate(in f:real, in a:real) -> real");
  SUBCASE("no candidates") { CHECK(suggest_matches(req, {}).empty()); }
  SUBCASE("exact first") {
    std::vector<MatchCandidate> cands{
        {"org.x.bad", parse_signature("integrate(in f:string) -> real")},
        {"org.x.good", parse_signature("quad(in f:real, in a:real) -> real")},
        {"org.x.worse", parse_signature("integrate() -> void")},
    };
    auto ranked = suggest_matches(req, cands);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].component_id == "org.x.good");
    CHECK(ranked[0].report.compatible);
  }
  SUBCASE("ordering equals a reference sort") {
    mwtest::Rng rng(31);
    for (int round = 0; round < 20; ++round) {
      auto required = pooled_signature(rng);
      std::vector<MatchCandidate> cands;
      for (int i = 0; i < 50; ++i) {
        cands.push_back({"org.c" + std::to_string(mwtest::pick(rng, 0, 20)) + ".m",
                         pooled_signature(rng)});
      }
      auto ranked = suggest_matches(required, cands);
      REQUIRE(ranked.size() == cands.size());
      struct Ref {
        bool ok;
        int exact, widened, dist;
        std::string id, port;
      };
      std::vector<Ref> refs;
      for (const auto& c : cands) {
        std::vector<EntryStatus> st;
        EntryStatus ret;
        bool ok = mwtest::brute_compat(required, c.port, kWiden, &st, &ret);
        st.push_back(ret);
        int exact = int(std::count(st.begin(), st.end(), EntryStatus::Ok));
        int widened = int(std::count(st.begin(), st.end(), EntryStatus::Widened));
        refs.push_back({ok, exact, widened, edit_distance(required.name, c.port.name),
                        c.component_id, c.port.name});
      }
      std::stable_sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
        if (a.ok != b.ok) return a.ok;
        if (a.exact != b.exact) return a.exact > b.exact;
        if (a.widened != b.widened) return a.widened > b.widened;
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.id != b.id) return a.id < b.id;
        return a.port < b.port;
      });
      for (std::size_t i = 0; i < refs.size(); ++i) {
        CHECK(ranked[i].component_id == refs[i].id);
        CHECK(ranked[i].port_name == refs[i].port);
        CHECK(ranked[i].report.compatible == refs[i].ok);
      }
      CHECK(suggest_matches(required, cands).size() == ranked.size());
    }
  }
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("same", "same") == 0);
}
