#pragma once

#include <chrono>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "modweave/compat/compat.hpp"
#include "modweave/graph/catalog.hpp"
#include "modweave/graph/project.hpp"
#include "modweave/runtime/provider.hpp"
#include "modweave/runtime/run_error.hpp"
#include "modweave/runtime/trace.hpp"

namespace modweave {

enum class PipeMode {
  Lowered,  // normalize_connectors first; connectors are ordinary instances
  Direct,   // the engine keeps one slot per pipe, named "pipe.<index>"
};

struct RunOptions {
  CompatPolicy policy{true, false};
  PipeMode pipe_mode = PipeMode::Lowered;
  std::chrono::milliseconds run_timeout{30000};
  std::chrono::milliseconds message_timeout{5000};
  std::ostream* sink = nullptr;  // print_sink output
  std::function<void(const TraceEvent&)> on_event;
};

// Input values of one invocation of a non-connector instance.
struct InputRecord {
  std::string instance;
  std::string port;
  std::vector<Value> args;
  friend bool operator==(const InputRecord&, const InputRecord&) = default;
};

struct RunResult {
  Value value;
  std::vector<std::pair<std::string, Value>> outs;
  RunTrace trace;
  std::vector<InputRecord> inputs;
  Project executed;  // the project actually run (normalized when Lowered)
};

// Invokes `entry` on the root with `args` (its in/inout values in order).
// Pipe-fed inputs are filled by the engine; a caller of a uses port passes
// only the remaining inputs. Throws RunError carrying the partial trace.
RunResult run_project(const Project& p, const Catalog& catalog, const ProviderSource& providers,
                      const std::string& entry, const std::vector<Value>& args,
                      const RunOptions& options = {});

}  // namespace modweave
