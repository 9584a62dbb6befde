#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "modweave/core/value.hpp"
#include "modweave/runtime/behaviors.hpp"
#include "modweave/runtime/provider.hpp"

namespace modweave {

struct SessionLimits {
  std::chrono::milliseconds message_timeout{5000};
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

struct SessionResult {
  Value value;
  std::vector<std::pair<std::string, Value>> outs;
};

// Launches the provider's command, sends `invoke`, answers each `call` by
// routing it through ctx, and finishes on `return`. The child is killed and
// reaped on every exit path. Throws RunError with kind ProviderLaunch,
// Protocol, Timeout or Behavior (child sent `error`); errors raised by
// ctx.call propagate unchanged.
SessionResult run_external_session(const ExternalProvider& provider, const std::string& port,
                                   const std::vector<Value>& args, InvocationContext& ctx,
                                   const SessionLimits& limits);

}  // namespace modweave
