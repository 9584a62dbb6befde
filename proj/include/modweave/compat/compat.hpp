#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modweave/core/descriptor.hpp"

namespace modweave {

struct CompatPolicy {
  // Accept an offered int where a real is required.
  bool widening = false;
  // Require parameter names to agree as well as types and modes.
  bool name_sensitivity = false;
};

enum class EntryStatus {
  Ok,
  Widened,
  Missing,       // required position has no offered counterpart
  Extra,         // offered position has no required counterpart
  ModeMismatch,
  TypeMismatch,
  NameMismatch,
};

std::string_view to_string(EntryStatus status);
inline bool entry_ok(EntryStatus s) {
  return s == EntryStatus::Ok || s == EntryStatus::Widened;
}

struct ArgumentEntry {
  std::size_t position = 0;
  std::optional<ParamSpec> required;
  std::optional<ParamSpec> offered;
  EntryStatus status = EntryStatus::Ok;
  std::string reason;
};

struct ReturnEntry {
  TypeSpec required;
  TypeSpec offered;
  EntryStatus status = EntryStatus::Ok;
  std::string reason;
};

struct ArityEntry {
  std::size_t required = 0;
  std::size_t offered = 0;
  bool ok = true;
};

// Per-argument verdict. compatible holds exactly when every entry is OK.
struct CompatReport {
  bool compatible = true;
  std::vector<ArgumentEntry> arguments;
  std::optional<ReturnEntry> return_entry;  // absent for pipe reports
  std::optional<ArityEntry> arity;          // absent for pipe reports
};

// Can a uses port with signature `required` be wired to a provide port
// offering `offered`? Lists every position, passing ones included.
CompatReport check_binding(const PortSignature& required,
                           const PortSignature& offered,
                           const CompatPolicy& policy);

// Single-entry report for piping `out_param` into `in_param`. Throws
// PreconditionError unless out_param is out/inout and in_param is in.
CompatReport check_pipe(const ParamSpec& out_param, const ParamSpec& in_param,
                        const CompatPolicy& policy);

struct MatchCandidate {
  std::string component_id;
  PortSignature port;
};

struct MatchSuggestion {
  std::string component_id;
  std::string port_name;
  CompatReport report;
  int exact_matches = 0;
  int widened_matches = 0;
  int name_distance = 0;  // edit distance between port names; lower is closer
};

// Ranks candidates: compatible first, then more exact positions, more
// widened positions, closer port name, component id, port name.
// Checks run with widening enabled.
std::vector<MatchSuggestion> suggest_matches(
    const PortSignature& required, const std::vector<MatchCandidate>& candidates);

int edit_distance(std::string_view a, std::string_view b);

}  // namespace modweave
