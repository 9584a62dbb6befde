#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "modweave/core/value.hpp"

namespace modweave {

struct InvokeEvent {
  std::string instance;
  std::string port;
  std::vector<Value> args;
  friend bool operator==(const InvokeEvent&, const InvokeEvent&) = default;
};

// `internal` calls are served by the caller's own default behavior; `child`
// then names that behavior rather than an instance.
struct CallEvent {
  std::string parent;
  std::string uses;
  std::string child;
  bool internal = false;
  friend bool operator==(const CallEvent&, const CallEvent&) = default;
};

struct PipePutEvent {
  std::string connector;
  Value value;
  friend bool operator==(const PipePutEvent&, const PipePutEvent&) = default;
};

struct PipeGetEvent {
  std::string connector;
  Value value;
  friend bool operator==(const PipeGetEvent&, const PipeGetEvent&) = default;
};

struct ReturnEvent {
  std::string instance;
  Value value;
  friend bool operator==(const ReturnEvent&, const ReturnEvent&) = default;
};

// Closes the innermost open Invoke when it fails.
struct ErrorEvent {
  std::string instance;
  std::string message;
  friend bool operator==(const ErrorEvent&, const ErrorEvent&) = default;
};

// An int argument or result converted to real at a call boundary.
struct WidenEvent {
  std::string instance;
  std::string port;
  std::string param;
  friend bool operator==(const WidenEvent&, const WidenEvent&) = default;
};

using TraceEvent = std::variant<InvokeEvent, CallEvent, PipePutEvent, PipeGetEvent,
                                ReturnEvent, ErrorEvent, WidenEvent>;

struct RunTrace {
  std::vector<TraceEvent> events;

  // Instance ids in order of their first Invoke.
  std::vector<std::string> first_invoke_order() const;
  // Every Invoke is closed by a Return or Error of the same instance, LIFO.
  bool is_balanced() const;
  std::size_t cross_instance_calls() const;

  friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

// One JSON object per event, e.g.
//   {"ev":"invoke","instance":"C1","port":"run","args":[]}
std::string encode_event(const TraceEvent& e);
TraceEvent decode_event(std::string_view line);  // throws ProtocolError
// Newline-terminated lines.
std::string write_trace(const RunTrace& trace);
RunTrace read_trace(std::string_view text);

}  // namespace modweave
