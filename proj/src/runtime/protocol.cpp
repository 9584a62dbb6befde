#include "modweave/runtime/protocol.hpp"

#include <cmath>

namespace modweave {

using nlohmann::ordered_json;

ordered_json value_to_json(const Value& v) {
  ordered_json j = ordered_json::object();
  if (v.is_void()) {
    j["t"] = "void";
    j["v"] = nullptr;
  } else if (v.is_int()) {
    j["t"] = "int";
    j["v"] = v.as_int();
  } else if (v.is_real()) {
    j["t"] = "real";
    double d = v.as_real();
    if (std::isnan(d)) {
      j["v"] = "nan";
    } else if (std::isinf(d)) {
      j["v"] = d > 0 ? "inf" : "-inf";
    } else {
      j["v"] = d;
    }
  } else if (v.is_bool()) {
    j["t"] = "bool";
    j["v"] = v.as_bool();
  } else if (v.is_string()) {
    j["t"] = "string";
    j["v"] = v.as_string();
  } else if (v.is_array()) {
    j["t"] = "array";
    ordered_json items = ordered_json::array();
    for (const auto& item : v.items()) items.push_back(value_to_json(item));
    j["v"] = std::move(items);
  } else {
    j["t"] = "record";
    ordered_json fields = ordered_json::object();
    for (std::size_t i = 0; i < v.field_names().size(); ++i) {
      fields[v.field_names()[i]] = value_to_json(v.field_values()[i]);
    }
    j["v"] = std::move(fields);
  }
  return j;
}

Value value_from_json(const ordered_json& j) {
  if (!j.is_object()) throw ProtocolError("typed value must be an object");
  auto t_it = j.find("t");
  if (t_it == j.end() || !t_it->is_string()) {
    throw ProtocolError("typed value lacks a string 't' field");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "t" && it.key() != "v") {
      throw ProtocolError("typed value has unexpected field '" + it.key() + "'");
    }
  }
  const std::string t = t_it->get<std::string>();
  auto v_it = j.find("v");
  if (t == "void") {
    if (v_it != j.end() && !v_it->is_null()) throw ProtocolError("void carries a value");
    return Value();
  }
  if (v_it == j.end()) throw ProtocolError("typed value lacks 'v'");
  const ordered_json& v = *v_it;
  if (t == "int") {
    if (!v.is_number_integer()) throw ProtocolError("int value is not an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > INT64_MAX) {
      throw ProtocolError("int value out of range");
    }
    return Value::integer(v.get<std::int64_t>());
  }
  if (t == "real") {
    if (v.is_number()) return Value::real(v.get<double>());
    if (v.is_string()) {
      const auto& s = v.get_ref<const std::string&>();
      if (s == "nan") return Value::real(std::nan(""));
      if (s == "inf") return Value::real(INFINITY);
      if (s == "-inf") return Value::real(-INFINITY);
    }
    throw ProtocolError("real value is not a number");
  }
  if (t == "bool") {
    if (!v.is_boolean()) throw ProtocolError("bool value is not a boolean");
    return Value::boolean(v.get<bool>());
  }
  if (t == "string") {
    if (!v.is_string()) throw ProtocolError("string value is not a string");
    return Value::string(v.get<std::string>());
  }
  if (t == "array") {
    if (!v.is_array()) throw ProtocolError("array value is not a list");
    Value::Array items;
    for (const auto& item : v) items.push_back(value_from_json(item));
    return Value::array(std::move(items));
  }
  if (t == "record") {
    if (!v.is_object()) throw ProtocolError("record value is not an object");
    std::vector<std::string> names;
    Value::Array values;
    for (auto it = v.begin(); it != v.end(); ++it) {
      names.push_back(it.key());
      values.push_back(value_from_json(it.value()));
    }
    return Value::record(std::move(names), std::move(values));
  }
  throw ProtocolError("unknown value tag '" + t + "'");
}

std::string dump_json(const ordered_json& j) {
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

std::string encode_value(const Value& v) { return dump_json(value_to_json(v)); }

Value decode_value(std::string_view text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ProtocolError("malformed typed value");
  return value_from_json(j);
}

namespace protocol {

namespace {

ordered_json args_json(const std::vector<Value>& args) {
  ordered_json out = ordered_json::array();
  for (const auto& a : args) out.push_back(value_to_json(a));
  return out;
}

std::vector<Value> args_from(const ordered_json& j) {
  auto it = j.find("args");
  if (it == j.end() || !it->is_array()) throw ProtocolError("message lacks an 'args' list");
  std::vector<Value> out;
  for (const auto& a : *it) out.push_back(value_from_json(a));
  return out;
}

std::string string_field(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ProtocolError(std::string("message lacks a string '") + key + "' field");
  }
  return it->get<std::string>();
}

Value value_field(const ordered_json& j) {
  auto it = j.find("value");
  if (it == j.end()) throw ProtocolError("message lacks a 'value' field");
  return value_from_json(*it);
}

}  // namespace

std::string encode(const Message& m) {
  ordered_json j = ordered_json::object();
  std::visit(
      [&](const auto& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, Invoke>) {
          j["op"] = "invoke";
          j["port"] = msg.port;
          j["args"] = args_json(msg.args);
        } else if constexpr (std::is_same_v<T, Result>) {
          j["op"] = "result";
          j["value"] = value_to_json(msg.value);
        } else if constexpr (std::is_same_v<T, Call>) {
          j["op"] = "call";
          j["port"] = msg.port;
          j["args"] = args_json(msg.args);
        } else if constexpr (std::is_same_v<T, Return>) {
          j["op"] = "return";
          j["value"] = value_to_json(msg.value);
          if (!msg.outs.empty()) {
            ordered_json outs = ordered_json::object();
            for (const auto& [name, v] : msg.outs) outs[name] = value_to_json(v);
            j["outs"] = std::move(outs);
          }
        } else {
          j["op"] = "error";
          j["message"] = msg.message;
        }
      },
      m);
  return dump_json(j);
}

static Message decode_unchecked(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded()) throw ProtocolError("malformed message line");
  if (!j.is_object()) throw ProtocolError("message is not an object");
  const std::string op = string_field(j, "op");
  if (op == "invoke") return Invoke{string_field(j, "port"), args_from(j)};
  if (op == "call") return Call{string_field(j, "port"), args_from(j)};
  if (op == "result") return Result{value_field(j)};
  if (op == "error") return Error{string_field(j, "message")};
  if (op == "return") {
    Return r{value_field(j), {}};
    if (auto it = j.find("outs"); it != j.end()) {
      if (!it->is_object()) throw ProtocolError("'outs' must be an object");
      for (auto o = it->begin(); o != it->end(); ++o) {
        r.outs.emplace_back(o.key(), value_from_json(o.value()));
      }
    }
    return r;
  }
  throw ProtocolError("unknown op '" + op + "'");
}

Message decode(std::string_view line) {
  try {
    return decode_unchecked(line);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
}

}  // namespace protocol
}  // namespace modweave
