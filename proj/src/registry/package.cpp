#include "modweave/registry/package.hpp"

#include <charconv>

#include "modweave/io/project_io.hpp"
#include "modweave/io/xml.hpp"
#include "modweave/runtime/behaviors.hpp"

namespace modweave {

namespace {

const std::string& need(const Element& e, const char* name, const std::string& path) {
  const std::string* v = e.attribute(name);
  if (!v) throw ValidationError(path + "/@" + name, "missing attribute");
  return *v;
}

double parse_double(const std::string& text, const std::string& path) {
  double d = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(path, "not a number: '" + text + "'");
  }
  return d;
}

}  // namespace

SkinSpec default_skin() { return SkinSpec{}; }

std::string serialize_skin(const SkinSpec& skin) {
  Element root{"skin", {}, {}, {}};
  root.set_attribute("ref", skin.ref);
  root.set_attribute("size", format_number(skin.base_size));
  root.set_attribute("color", skin.color);
  root.set_attribute("icon", skin.icon);
  for (const auto& [port, hint] : skin.port_hints) {
    root.children.push_back(Element{"port", {{"name", port}, {"hint", hint}}, {}, {}});
  }
  return xml::write(root);
}

SkinSpec parse_skin(std::string_view text) {
  Element root = xml::parse(text);
  if (root.name != "skin") throw ValidationError(root.name, "expected <skin>");
  SkinSpec skin;
  skin.ref = need(root, "ref", "skin");
  if (auto* v = root.attribute("size")) skin.base_size = parse_double(*v, "skin/@size");
  if (auto* v = root.attribute("color")) skin.color = *v;
  if (auto* v = root.attribute("icon")) skin.icon = *v;
  for (std::size_t i = 0; i < root.children.size(); ++i) {
    const Element& c = root.children[i];
    std::string path = "skin/port[" + std::to_string(i) + "]";
    if (c.name != "port") throw ValidationError(path, "unexpected <" + c.name + ">");
    skin.port_hints[need(c, "name", path)] = need(c, "hint", path);
  }
  return skin;
}

std::string serialize_manifest(const BehaviorProvider& provider) {
  Element root{"manifest", {}, {}, {}};
  if (auto* b = std::get_if<BuiltinProvider>(&provider)) {
    root.children.push_back(Element{"builtin", {{"behavior", b->behavior}}, {}, {}});
    for (const auto& [name, spec] : b->exports) {
      root.children.push_back(Element{"export", {{"name", name}, {"behavior", spec}}, {}, {}});
    }
  } else {
    const auto& e = std::get<ExternalProvider>(provider);
    root.children.push_back(Element{
        "external", {{"command", e.command}, {"workdir", e.working_directory}}, {}, {}});
    for (const auto& name : e.exports) {
      root.children.push_back(Element{"export", {{"name", name}}, {}, {}});
    }
  }
  return xml::write(root);
}

BehaviorProvider parse_manifest(std::string_view text) {
  Element root = xml::parse(text);
  if (root.name != "manifest") throw ValidationError(root.name, "expected <manifest>");
  if (root.children.empty()) {
    throw ValidationError("manifest", "needs a <builtin> or <external> element first");
  }
  const Element& head = root.children.front();
  BehaviorProvider out;
  if (head.name == "builtin") {
    BuiltinProvider b;
    b.behavior = need(head, "behavior", "manifest/builtin");
    out = b;
  } else if (head.name == "external") {
    ExternalProvider e;
    e.command = need(head, "command", "manifest/external");
    if (auto* w = head.attribute("workdir")) e.working_directory = *w;
    out = e;
  } else {
    throw ValidationError("manifest/" + head.name, "expected <builtin> or <external>");
  }
  for (std::size_t i = 1; i < root.children.size(); ++i) {
    const Element& c = root.children[i];
    std::string path = "manifest/export[" + std::to_string(i - 1) + "]";
    if (c.name != "export") throw ValidationError(path, "unexpected <" + c.name + ">");
    const std::string& name = need(c, "name", path);
    if (auto* b = std::get_if<BuiltinProvider>(&out)) {
      b->exports[name] = need(c, "behavior", path);
    } else {
      std::get<ExternalProvider>(out).exports.insert(name);
    }
  }
  return out;
}

std::vector<Diagnostic> validate_package(const ComponentPackage& pkg) {
  std::vector<Diagnostic> out = validate_descriptor(pkg.descriptor);
  auto error = [&](std::string path, std::string message) {
    out.push_back(Diagnostic{Severity::Error, std::move(path), std::move(message)});
  };
  if (auto* b = std::get_if<BuiltinProvider>(&pkg.behavior)) {
    try {
      parse_behavior(b->behavior);
    } catch (const ParseError& e) {
      error("manifest/builtin", e.what());
    }
    for (const auto& [name, spec] : b->exports) {
      try {
        parse_behavior(spec);
      } catch (const ParseError& e) {
        error("manifest/export[" + name + "]", e.what());
      }
    }
  } else if (std::get<ExternalProvider>(pkg.behavior).command.empty()) {
    error("manifest/external", "empty command");
  }
  const auto& uses = pkg.descriptor.uses_ports;
  for (std::size_t i = 0; i < uses.size(); ++i) {
    const auto& u = uses[i];
    if (u.default_binding && !provider_exports(pkg.behavior, *u.default_binding)) {
      error("uses_ports[" + std::to_string(i) + "]",
            "default '" + *u.default_binding + "' of uses port '" + u.name() +
                "' is not exported by the manifest");
    }
  }
  if (pkg.skin) {
    if (!pkg.descriptor.skin_ref) {
      error("skin", "package carries a skin but the descriptor has no skin reference");
    } else if (pkg.skin->ref != *pkg.descriptor.skin_ref) {
      error("skin", "skin ref '" + pkg.skin->ref + "' differs from descriptor skin '" +
                        *pkg.descriptor.skin_ref + "'");
    }
  }
  return out;
}

}  // namespace modweave
