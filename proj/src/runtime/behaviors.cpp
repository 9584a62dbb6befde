#include "modweave/runtime/behaviors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <ostream>

#include "modweave/runtime/provider.hpp"
#include "modweave/runtime/run_error.hpp"

namespace modweave {

namespace {

constexpr std::array<std::string_view, 8> kBuiltins{
    "const", "add", "mul", "neg", "compare", "print_sink", "seq_driver", "id"};

[[noreturn]] void fail(const std::string& message) {
  throw RunError(RunErrorKind::Behavior, message);
}

void expect_arity(std::string_view name, const std::vector<Value>& args, std::size_t n) {
  if (args.size() != n) {
    fail(std::string(name) + " expects " + std::to_string(n) + " argument(s), got " +
         std::to_string(args.size()));
  }
}

bool numeric(const Value& v) { return v.is_int() || v.is_real(); }

double as_double(const Value& v) {
  return v.is_int() ? static_cast<double>(v.as_int()) : v.as_real();
}

Value arithmetic(std::string_view name, const Value& a, const Value& b) {
  if (!numeric(a) || !numeric(b)) {
    fail(std::string(name) + " needs numeric arguments, got " + to_display(a) + " and " +
         to_display(b));
  }
  if (a.is_int() && b.is_int()) {
    std::int64_t out = 0;
    bool overflow = name == "add" ? __builtin_add_overflow(a.as_int(), b.as_int(), &out)
                                  : __builtin_mul_overflow(a.as_int(), b.as_int(), &out);
    if (overflow) fail(std::string(name) + " overflows int");
    return Value::integer(out);
  }
  double x = as_double(a);
  double y = as_double(b);
  return Value::real(name == "add" ? x + y : x * y);
}

int sign_of_compare(const Value& a, const Value& b) {
  if (numeric(a) && numeric(b)) {
    if (a.is_int() && b.is_int()) return (a.as_int() > b.as_int()) - (a.as_int() < b.as_int());
    double x = as_double(a);
    double y = as_double(b);
    return (x > y) - (x < y);
  }
  if (a.is_string() && b.is_string()) {
    int c = a.as_string().compare(b.as_string());
    return (c > 0) - (c < 0);
  }
  if (a.is_bool() && b.is_bool()) return int(a.as_bool()) - int(b.as_bool());
  fail("compare needs two numbers, strings or bools, got " + to_display(a) + " and " +
       to_display(b));
}

Value seq_driver(const std::vector<Value>& args, InvocationContext& ctx) {
  std::optional<Value> carry;
  if (!args.empty()) carry = args.front();
  for (const auto& port : ctx.callable_uses_ports()) {
    std::vector<Value> call_args;
    std::size_t needed = ctx.free_inputs(port);
    if (needed == 1) {
      if (!carry) fail("seq_driver has no value to pass to uses port '" + port + "'");
      call_args.push_back(*carry);
    } else if (needed > 1) {
      fail("seq_driver cannot supply " + std::to_string(needed) +
           " inputs to uses port '" + port + "'");
    }
    Value result = ctx.call(port, std::move(call_args));
    if (!result.is_void()) carry = std::move(result);
  }
  if (ctx.signature().return_type.is_void() || !carry) return Value();
  return *carry;
}

std::optional<Value> parse_literal(std::string_view text) {
  if (text == "true") return Value::boolean(true);
  if (text == "false") return Value::boolean(false);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    return Value::string(std::string(text.substr(1, text.size() - 2)));
  }
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (text.find_first_of(".eEn") == std::string_view::npos) {
    std::int64_t i = 0;
    auto [ptr, ec] = std::from_chars(first, last, i);
    if (ec == std::errc() && ptr == last) return Value::integer(i);
    return std::nullopt;
  }
  double d = 0;
  auto [ptr, ec] = std::from_chars(first, last, d);
  if (ec == std::errc() && ptr == last) return Value::real(d);
  return std::nullopt;
}

}  // namespace

bool provider_exports(const BehaviorProvider& provider, std::string_view name) {
  if (auto* b = std::get_if<BuiltinProvider>(&provider)) {
    return b->exports.count(std::string(name)) > 0;
  }
  return std::get<ExternalProvider>(provider).exports.count(std::string(name)) > 0;
}

bool is_builtin_behavior(std::string_view name) {
  for (auto b : kBuiltins) {
    if (b == name) return true;
  }
  return false;
}

BehaviorSpec parse_behavior(std::string_view text) {
  BehaviorSpec spec;
  auto open = text.find('(');
  spec.name = std::string(text.substr(0, open));
  if (open != std::string_view::npos) {
    if (text.back() != ')') throw ParseError("behavior '" + std::string(text) + "' lacks ')'");
    std::string_view literal = text.substr(open + 1, text.size() - open - 2);
    spec.argument = parse_literal(literal);
    if (!spec.argument) {
      throw ParseError("behavior '" + std::string(text) + "' has a malformed literal");
    }
  }
  if (!is_builtin_behavior(spec.name)) {
    throw ParseError("unknown built-in behavior '" + spec.name + "'");
  }
  if (spec.name == "const" && !spec.argument) {
    throw ParseError("const needs a literal, e.g. const(2)");
  }
  if (spec.name != "const" && spec.argument) {
    throw ParseError("behavior '" + spec.name + "' takes no literal");
  }
  return spec;
}

std::string format_behavior(const BehaviorSpec& spec) {
  if (!spec.argument) return spec.name;
  const Value& v = *spec.argument;
  std::string literal;
  if (v.is_real()) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v.as_real());
    literal.assign(buf, ptr);
    if (literal.find_first_of(".eEn") == std::string::npos) literal += ".0";
  } else {
    literal = to_display(v);
  }
  return spec.name + "(" + literal + ")";
}

Value invoke_builtin(const BehaviorSpec& spec, const std::vector<Value>& args,
                     InvocationContext& ctx) {
  const std::string& name = spec.name;
  if (name == "const") return *spec.argument;
  if (name == "add" || name == "mul") {
    expect_arity(name, args, 2);
    return arithmetic(name, args[0], args[1]);
  }
  if (name == "neg") {
    expect_arity(name, args, 1);
    const Value& x = args[0];
    if (x.is_int()) {
      std::int64_t out = 0;
      if (__builtin_sub_overflow(std::int64_t{0}, x.as_int(), &out)) fail("neg overflows int");
      return Value::integer(out);
    }
    if (x.is_real()) return Value::real(-x.as_real());
    fail("neg needs a number, got " + to_display(x));
  }
  if (name == "compare") {
    expect_arity(name, args, 2);
    return Value::integer(sign_of_compare(args[0], args[1]));
  }
  if (name == "id") {
    expect_arity(name, args, 1);
    return args[0];
  }
  if (name == "print_sink") {
    if (std::ostream* out = ctx.sink()) {
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) *out << ' ';
        *out << to_display(args[i]);
      }
      *out << '\n';
    }
    return Value();
  }
  if (name == "seq_driver") return seq_driver(args, ctx);
  fail("unknown built-in behavior '" + name + "'");
}

}  // namespace modweave
