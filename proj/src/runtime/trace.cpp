#include "modweave/runtime/trace.hpp"

#include <set>
#include <sstream>

#include "modweave/runtime/protocol.hpp"

namespace modweave {

using nlohmann::ordered_json;

std::vector<std::string> RunTrace::first_invoke_order() const {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& e : events) {
    if (const auto* inv = std::get_if<InvokeEvent>(&e)) {
      if (seen.insert(inv->instance).second) order.push_back(inv->instance);
    }
  }
  return order;
}

bool RunTrace::is_balanced() const {
  std::vector<std::string> open;
  for (const auto& e : events) {
    if (const auto* inv = std::get_if<InvokeEvent>(&e)) {
      open.push_back(inv->instance);
    } else if (const auto* ret = std::get_if<ReturnEvent>(&e)) {
      if (open.empty() || open.back() != ret->instance) return false;
      open.pop_back();
    } else if (const auto* err = std::get_if<ErrorEvent>(&e)) {
      if (open.empty() || open.back() != err->instance) return false;
      open.pop_back();
    }
  }
  return open.empty();
}

std::size_t RunTrace::cross_instance_calls() const {
  std::size_t n = 0;
  for (const auto& e : events) {
    if (const auto* c = std::get_if<CallEvent>(&e); c && !c->internal) ++n;
  }
  return n;
}

std::string encode_event(const TraceEvent& e) {
  ordered_json j = ordered_json::object();
  std::visit(
      [&](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, InvokeEvent>) {
          j["ev"] = "invoke";
          j["instance"] = ev.instance;
          j["port"] = ev.port;
          ordered_json args = ordered_json::array();
          for (const auto& a : ev.args) args.push_back(value_to_json(a));
          j["args"] = std::move(args);
        } else if constexpr (std::is_same_v<T, CallEvent>) {
          j["ev"] = "call";
          j["parent"] = ev.parent;
          j["uses"] = ev.uses;
          j["child"] = ev.child;
          j["internal"] = ev.internal;
        } else if constexpr (std::is_same_v<T, PipePutEvent>) {
          j["ev"] = "put";
          j["connector"] = ev.connector;
          j["value"] = value_to_json(ev.value);
        } else if constexpr (std::is_same_v<T, PipeGetEvent>) {
          j["ev"] = "get";
          j["connector"] = ev.connector;
          j["value"] = value_to_json(ev.value);
        } else if constexpr (std::is_same_v<T, ReturnEvent>) {
          j["ev"] = "return";
          j["instance"] = ev.instance;
          j["value"] = value_to_json(ev.value);
        } else if constexpr (std::is_same_v<T, ErrorEvent>) {
          j["ev"] = "error";
          j["instance"] = ev.instance;
          j["message"] = ev.message;
        } else {
          j["ev"] = "widen";
          j["instance"] = ev.instance;
          j["port"] = ev.port;
          j["param"] = ev.param;
        }
      },
      e);
  return dump_json(j);
}

namespace {

std::string str(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ProtocolError(std::string("trace event lacks string '") + key + "'");
  }
  return it->get<std::string>();
}

Value val(const ordered_json& j) {
  auto it = j.find("value");
  if (it == j.end()) throw ProtocolError("trace event lacks 'value'");
  return value_from_json(*it);
}

TraceEvent decode_event_unchecked(std::string_view line) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ProtocolError("malformed trace line");
  const std::string ev = str(j, "ev");
  if (ev == "invoke") {
    std::vector<Value> args;
    auto it = j.find("args");
    if (it == j.end() || !it->is_array()) throw ProtocolError("invoke lacks args");
    for (const auto& a : *it) args.push_back(value_from_json(a));
    return InvokeEvent{str(j, "instance"), str(j, "port"), std::move(args)};
  }
  if (ev == "call") {
    auto it = j.find("internal");
    return CallEvent{str(j, "parent"), str(j, "uses"), str(j, "child"),
                     it != j.end() && it->is_boolean() && it->get<bool>()};
  }
  if (ev == "put") return PipePutEvent{str(j, "connector"), val(j)};
  if (ev == "get") return PipeGetEvent{str(j, "connector"), val(j)};
  if (ev == "return") return ReturnEvent{str(j, "instance"), val(j)};
  if (ev == "error") return ErrorEvent{str(j, "instance"), str(j, "message")};
  if (ev == "widen") return WidenEvent{str(j, "instance"), str(j, "port"), str(j, "param")};
  throw ProtocolError("unknown trace event '" + ev + "'");
}

}  // namespace

TraceEvent decode_event(std::string_view line) {
  try {
    return decode_event_unchecked(line);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed trace line: ") + e.what());
  }
}

std::string write_trace(const RunTrace& trace) {
  std::string out;
  for (const auto& e : trace.events) {
    out += encode_event(e);
    out += '\n';
  }
  return out;
}

RunTrace read_trace(std::string_view text) {
  RunTrace trace;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty()) trace.events.push_back(decode_event(line));
    start = end + 1;
  }
  return trace;
}

}  // namespace modweave
