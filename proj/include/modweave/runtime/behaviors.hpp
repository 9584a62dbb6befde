#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modweave/core/descriptor.hpp"
#include "modweave/core/value.hpp"

namespace modweave {

// A built-in behavior reference such as "add" or "const(2.5)".
struct BehaviorSpec {
  std::string name;
  std::optional<Value> argument;
  friend bool operator==(const BehaviorSpec&, const BehaviorSpec&) = default;
};

// Literal arguments: integers, reals (with '.' or exponent), true/false, or
// double-quoted strings. Throws ParseError.
BehaviorSpec parse_behavior(std::string_view text);
std::string format_behavior(const BehaviorSpec& spec);

// const, add, mul, neg, compare, print_sink, seq_driver, id
bool is_builtin_behavior(std::string_view name);

// What a behavior sees of the engine while serving one invocation.
class InvocationContext {
 public:
  virtual ~InvocationContext() = default;

  virtual const std::string& instance() const = 0;
  // Signature of the port (or default) being served.
  virtual const PortSignature& signature() const = 0;
  // Uses ports that are bound or defaulted, in declaration order.
  virtual std::vector<std::string> callable_uses_ports() const = 0;
  // Inputs the caller must supply when calling `uses_port`; inputs fed by
  // pipes are filled in by the engine.
  virtual std::size_t free_inputs(const std::string& uses_port) const = 0;
  virtual Value call(const std::string& uses_port, std::vector<Value> args) = 0;
  // Destination for print_sink; may be null.
  virtual std::ostream* sink() = 0;
};

// Runs a built-in behavior. `args` are the in/inout values in parameter
// order. Integer arithmetic is exact and overflow is an error; reals follow
// IEEE double. Throws RunError(Behavior) on arity or shape mismatch.
Value invoke_builtin(const BehaviorSpec& spec, const std::vector<Value>& args,
                     InvocationContext& ctx);

}  // namespace modweave
