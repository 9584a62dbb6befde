#pragma once

#include <string>
#include <string_view>

#include "modweave/core/error.hpp"
#include "modweave/runtime/trace.hpp"

namespace modweave {

enum class RunErrorKind {
  InvalidProject,
  ProviderLaunch,
  Protocol,
  ConnectorUnderflow,
  ConnectorOverflow,
  ShapeMismatch,
  Timeout,
  Behavior,
};

std::string_view to_string(RunErrorKind kind);

// Failure while executing a project. Carries the trace recorded up to and
// including the error events.
class RunError : public Error {
 public:
  RunError(RunErrorKind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  RunErrorKind kind() const { return kind_; }
  const RunTrace& trace() const { return trace_; }
  void set_trace(RunTrace trace) { trace_ = std::move(trace); }

 private:
  RunErrorKind kind_;
  RunTrace trace_;
};

}  // namespace modweave
