#include "modweave/core/descriptor.hpp"

#include <cctype>
#include <set>

namespace modweave {

std::string_view to_string(ParamMode mode) {
  switch (mode) {
    case ParamMode::In:
      return "in";
    case ParamMode::Out:
      return "out";
    case ParamMode::InOut:
      return "inout";
  }
  return "in";
}

std::optional<ParamMode> parse_param_mode(std::string_view text) {
  if (text == "in") return ParamMode::In;
  if (text == "out") return ParamMode::Out;
  if (text == "inout") return ParamMode::InOut;
  return std::nullopt;
}

const ParamSpec* PortSignature::find_param(std::string_view param) const {
  for (const auto& p : params) {
    if (p.name == param) return &p;
  }
  return nullptr;
}

const ProvidePortSpec* ComponentDescriptor::find_provide(
    std::string_view name) const {
  for (const auto& p : provide_ports) {
    if (p.name() == name) return &p;
  }
  return nullptr;
}

const UsesPortSpec* ComponentDescriptor::find_uses(std::string_view name) const {
  for (const auto& u : uses_ports) {
    if (u.name() == name) return &u;
  }
  return nullptr;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error" : "warning";
  if (!d.path.empty()) out += ": " + d.path;
  return out + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto c0 = static_cast<unsigned char>(text[0]);
  if (!std::isalpha(c0) && c0 != '_') return false;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && u != '_') return false;
  }
  return true;
}

bool is_component_id(std::string_view text) {
  int labels = 0;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = text.find('.', start);
    std::string_view label = text.substr(
        start, dot == std::string_view::npos ? std::string_view::npos
                                             : dot - start);
    if (label.empty()) return false;
    auto c0 = static_cast<unsigned char>(label[0]);
    if (!std::isalpha(c0) && c0 != '_') return false;
    for (char c : label) {
      auto u = static_cast<unsigned char>(c);
      if (!std::isalnum(u) && u != '_' && u != '-') return false;
    }
    ++labels;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return labels >= 2;
}

bool is_version(std::string_view text) {
  if (text.empty() || text.front() == '.' || text.back() == '.') return false;
  char prev = '.';
  for (char c : text) {
    if (c == '.') {
      if (prev == '.') return false;
    } else if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
    prev = c;
  }
  return true;
}

namespace {

class DescriptorChecker {
 public:
  std::vector<Diagnostic> run(const ComponentDescriptor& d) {
    if (!is_component_id(d.id)) {
      error("id", "'" + d.id + "' is not a reverse-domain component id");
    }
    if (!is_version(d.version)) {
      error("version", "'" + d.version + "' is not a dotted numeric version");
    }
    if (d.provide_ports.empty()) {
      error("provide_ports", "a component needs at least one provide port");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < d.provide_ports.size(); ++i) {
      std::string path = "provide_ports[" + std::to_string(i) + "]";
      const auto& sig = d.provide_ports[i].signature;
      if (!names.insert(sig.name).second) {
        error(path, "duplicate provide port name '" + sig.name + "'");
      }
      check_signature(sig, path + ".signature");
    }
    names.clear();
    for (std::size_t i = 0; i < d.uses_ports.size(); ++i) {
      std::string path = "uses_ports[" + std::to_string(i) + "]";
      const auto& port = d.uses_ports[i];
      if (!names.insert(port.name()).second) {
        error(path, "duplicate uses port name '" + port.name() + "'");
      }
      if (port.mandatory && port.default_binding) {
        error(path, "mandatory port '" + port.name() +
                        "' must not have a default binding");
      } else if (!port.mandatory && !port.default_binding) {
        error(path, "optional port '" + port.name() +
                        "' needs a default binding");
      }
      if (port.default_binding && !is_identifier(*port.default_binding)) {
        error(path + ".default_binding",
              "'" + *port.default_binding + "' is not an identifier");
      }
      check_signature(port.signature, path + ".signature");
    }
    if (d.skin_ref && d.skin_ref->empty()) {
      error("skin_ref", "empty skin reference");
    }
    return std::move(out_);
  }

 private:
  void check_signature(const PortSignature& sig, const std::string& path) {
    if (!is_identifier(sig.name)) {
      error(path + ".name", "'" + sig.name + "' is not an identifier");
    }
    std::set<std::string> params;
    for (std::size_t j = 0; j < sig.params.size(); ++j) {
      const auto& p = sig.params[j];
      std::string ppath = path + ".params[" + std::to_string(j) + "]";
      if (!is_identifier(p.name)) {
        error(ppath, "'" + p.name + "' is not an identifier");
      }
      if (!params.insert(p.name).second) {
        error(ppath, "duplicate parameter name '" + p.name + "'");
      }
      if (p.type.is_void()) {
        error(ppath, "parameter '" + p.name + "' has type void");
      }
      for (const auto& problem : type_problems(p.type)) error(ppath, problem);
    }
    for (const auto& problem : type_problems(sig.return_type)) {
      error(path + ".return_type", problem);
    }
  }

  void error(std::string path, std::string message) {
    out_.push_back({Severity::Error, std::move(path), std::move(message)});
  }

  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_descriptor(const ComponentDescriptor& d) {
  return DescriptorChecker().run(d);
}

}  // namespace modweave
