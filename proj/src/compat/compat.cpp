#include "modweave/compat/compat.hpp"

#include <algorithm>
#include <tuple>

#include "modweave/core/error.hpp"

namespace modweave {

namespace {

// Status of placing a value of type `offered` where `required` is expected.
EntryStatus compare_types(const TypeSpec& required, const TypeSpec& offered,
                          const CompatPolicy& policy) {
  if (required == offered) return EntryStatus::Ok;
  if (policy.widening && required.is(PrimitiveKind::Real) &&
      offered.is(PrimitiveKind::Int)) {
    return EntryStatus::Widened;
  }
  return EntryStatus::TypeMismatch;
}

std::string describe(const ParamSpec& p) {
  return std::string(to_string(p.mode)) + " " + p.name + ":" + format_type(p.type);
}

}  // namespace

std::string_view to_string(EntryStatus status) {
  switch (status) {
    case EntryStatus::Ok:
      return "ok";
    case EntryStatus::Widened:
      return "widened";
    case EntryStatus::Missing:
      return "missing";
    case EntryStatus::Extra:
      return "extra";
    case EntryStatus::ModeMismatch:
      return "mode_mismatch";
    case EntryStatus::TypeMismatch:
      return "type_mismatch";
    case EntryStatus::NameMismatch:
      return "name_mismatch";
  }
  return "?";
}

CompatReport check_binding(const PortSignature& required,
                           const PortSignature& offered,
                           const CompatPolicy& policy) {
  CompatReport report;
  const std::size_t n_req = required.params.size();
  const std::size_t n_off = offered.params.size();
  report.arity = ArityEntry{n_req, n_off, n_req == n_off};
  for (std::size_t i = 0; i < std::max(n_req, n_off); ++i) {
    ArgumentEntry entry;
    entry.position = i;
    if (i < n_req) entry.required = required.params[i];
    if (i < n_off) entry.offered = offered.params[i];
    if (!entry.offered) {
      entry.status = EntryStatus::Missing;
      entry.reason = "no offered parameter for " + describe(*entry.required);
    } else if (!entry.required) {
      entry.status = EntryStatus::Extra;
      entry.reason = "offered parameter " + describe(*entry.offered) +
                     " has no required counterpart";
    } else if (entry.required->mode != entry.offered->mode) {
      entry.status = EntryStatus::ModeMismatch;
      entry.reason = "mode " + std::string(to_string(entry.required->mode)) +
                     " required, " + std::string(to_string(entry.offered->mode)) +
                     " offered";
    } else if ((entry.status = compare_types(entry.required->type,
                                             entry.offered->type, policy)) ==
               EntryStatus::TypeMismatch) {
      entry.reason = "type " + format_type(entry.required->type) +
                     " required, " + format_type(entry.offered->type) + " offered";
    } else if (policy.name_sensitivity &&
               entry.required->name != entry.offered->name) {
      entry.status = EntryStatus::NameMismatch;
      entry.reason = "name '" + entry.required->name + "' required, '" +
                     entry.offered->name + "' offered";
    } else if (entry.status == EntryStatus::Widened) {
      entry.reason = "int widened to real";
    }
    report.compatible = report.compatible && entry_ok(entry.status);
    report.arguments.push_back(std::move(entry));
  }
  ReturnEntry ret{required.return_type, offered.return_type,
                  compare_types(required.return_type, offered.return_type, policy),
                  {}};
  if (ret.status == EntryStatus::TypeMismatch) {
    ret.reason = "return " + format_type(ret.required) + " required, " +
                 format_type(ret.offered) + " offered";
  } else if (ret.status == EntryStatus::Widened) {
    ret.reason = "int widened to real";
  }
  report.compatible = report.compatible && entry_ok(ret.status) && report.arity->ok;
  report.return_entry = std::move(ret);
  return report;
}

CompatReport check_pipe(const ParamSpec& out_param, const ParamSpec& in_param,
                        const CompatPolicy& policy) {
  if (!is_output(out_param.mode)) {
    throw PreconditionError("pipe source '" + out_param.name +
                            "' must be an out or inout parameter");
  }
  if (in_param.mode != ParamMode::In) {
    throw PreconditionError("pipe target '" + in_param.name +
                            "' must be an in parameter");
  }
  ArgumentEntry entry;
  entry.required = in_param;
  entry.offered = out_param;
  entry.status = compare_types(in_param.type, out_param.type, policy);
  if (entry.status == EntryStatus::TypeMismatch) {
    entry.reason = "type " + format_type(in_param.type) + " required, " +
                   format_type(out_param.type) + " offered";
  } else if (entry.status == EntryStatus::Widened) {
    entry.reason = "int widened to real";
  }
  CompatReport report;
  report.compatible = entry_ok(entry.status);
  report.arguments.push_back(std::move(entry));
  return report;
}

int edit_distance(std::string_view a, std::string_view b) {
  std::vector<int> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    int diagonal = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int above = row[j];
      int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + cost});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::vector<MatchSuggestion> suggest_matches(
    const PortSignature& required, const std::vector<MatchCandidate>& candidates) {
  const CompatPolicy policy{.widening = true, .name_sensitivity = false};
  std::vector<MatchSuggestion> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    MatchSuggestion s;
    s.component_id = c.component_id;
    s.port_name = c.port.name;
    s.report = check_binding(required, c.port, policy);
    for (const auto& e : s.report.arguments) {
      if (e.status == EntryStatus::Ok) ++s.exact_matches;
      if (e.status == EntryStatus::Widened) ++s.widened_matches;
    }
    if (s.report.return_entry->status == EntryStatus::Ok) ++s.exact_matches;
    if (s.report.return_entry->status == EntryStatus::Widened) ++s.widened_matches;
    s.name_distance = edit_distance(required.name, c.port.name);
    out.push_back(std::move(s));
  }
  auto key = [](const MatchSuggestion& s) {
    return std::make_tuple(!s.report.compatible, -s.exact_matches,
                           -s.widened_matches, s.name_distance,
                           std::cref(s.component_id), std::cref(s.port_name));
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return out;
}

}  // namespace modweave
