#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "modweave/core/error.hpp"
#include "modweave/core/value.hpp"

namespace modweave {

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Typed-value ("TV") encoding shared by the wire protocol, trace files and
// the HTTP API: {"t":"int|real|bool|string|void|array|record","v":...}.
// Arrays are lists of TVs, records ordered name->TV objects, void is null.
// Non-finite reals are written as the strings "nan", "inf", "-inf".
nlohmann::ordered_json value_to_json(const Value& v);
Value value_from_json(const nlohmann::ordered_json& j);  // throws ProtocolError
std::string dump_json(const nlohmann::ordered_json& j);

std::string encode_value(const Value& v);
Value decode_value(std::string_view text);

namespace protocol {

// engine -> child
struct Invoke {
  std::string port;
  std::vector<Value> args;
  friend bool operator==(const Invoke&, const Invoke&) = default;
};
struct Result {
  Value value;
  friend bool operator==(const Result&, const Result&) = default;
};
// child -> engine
struct Call {
  std::string port;
  std::vector<Value> args;
  friend bool operator==(const Call&, const Call&) = default;
};
// `outs` carries out/inout parameter values; encoded as an "outs" object
// only when non-empty.
struct Return {
  Value value;
  std::vector<std::pair<std::string, Value>> outs;
  friend bool operator==(const Return&, const Return&) = default;
};
struct Error {
  std::string message;
  friend bool operator==(const Error&, const Error&) = default;
};

using Message = std::variant<Invoke, Result, Call, Return, Error>;

// One message per line; the returned text has no trailing newline.
std::string encode(const Message& m);
// Never throws anything but ProtocolError, whatever the input.
Message decode(std::string_view line);

}  // namespace protocol
}  // namespace modweave
