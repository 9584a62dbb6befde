#include "modweave/io/descriptor_io.hpp"

#include "modweave/io/xml.hpp"

namespace modweave {

namespace {

std::string indexed(const std::string& parent, const char* name, std::size_t i) {
  return parent + "/" + name + "[" + std::to_string(i + 1) + "]";
}

const std::string& required(const Element& e, const char* attr,
                            const std::string& path) {
  const std::string* v = e.attribute(attr);
  if (v == nullptr) {
    throw ValidationError(path + "/@" + attr,
                          std::string("missing required attribute '") + attr + "'");
  }
  return *v;
}

TypeSpec type_attr(const Element& e, const std::string& path) {
  const std::string& text = required(e, "type", path);
  try {
    return parse_type(text);
  } catch (const ParseError& err) {
    throw ValidationError(path + "/@type", err.what());
  }
}

PortSignature read_port(const Element& port, const std::string& path) {
  PortSignature sig;
  sig.name = required(port, "name", path);
  std::size_t param_index = 0;
  for (const auto& c : port.children) {
    if (c.name == "doc") {
      sig.doc = c.text;
    } else if (c.name == "param") {
      std::string ppath = indexed(path, "param", param_index++);
      ParamSpec p;
      p.name = required(c, "name", ppath);
      p.type = type_attr(c, ppath);
      if (const auto* m = c.attribute("mode")) {
        auto mode = parse_param_mode(*m);
        if (!mode) {
          throw ValidationError(ppath + "/@mode", "unknown mode '" + *m + "'");
        }
        p.mode = *mode;
      }
      for (const auto& d : c.children) {
        if (d.name == "doc") p.doc = d.text;
      }
      sig.params.push_back(std::move(p));
    } else if (c.name == "return") {
      sig.return_type = type_attr(c, path + "/return");
    }
  }
  return sig;
}

Element doc_element(const std::string& text) {
  return Element{"doc", {}, {}, text};
}

Element write_port(const PortSignature& sig,
                   std::vector<std::pair<std::string, std::string>> extra) {
  Element port{"port", {{"name", sig.name}}, {}, {}};
  for (auto& kv : extra) port.attributes.push_back(std::move(kv));
  if (!sig.doc.empty()) port.children.push_back(doc_element(sig.doc));
  for (const auto& p : sig.params) {
    Element param{"param",
                  {{"name", p.name},
                   {"type", format_type(p.type)},
                   {"mode", std::string(to_string(p.mode))}},
                  {},
                  {}};
    if (!p.doc.empty()) param.children.push_back(doc_element(p.doc));
    port.children.push_back(std::move(param));
  }
  port.children.push_back(
      Element{"return", {{"type", format_type(sig.return_type)}}, {}, {}});
  return port;
}

}  // namespace

const SchemaRegistry& default_schema_registry() {
  static const SchemaRegistry registry = SchemaRegistry::with_builtins();
  return registry;
}

ComponentDescriptor descriptor_from_document(const Document& doc) {
  const Element& root = doc.root;
  if (root.name != "component") {
    throw ValidationError(root.name, "expected <component> root");
  }
  ComponentDescriptor d;
  d.schema_id = doc.schema_id;
  d.id = required(root, "id", "component");
  d.version = required(root, "version", "component");
  std::size_t provide_index = 0;
  std::size_t uses_index = 0;
  for (const auto& c : root.children) {
    if (c.name == "doc") {
      d.doc = c.text;
    } else if (c.name == "provide") {
      std::string path = indexed("component", "provide", provide_index++);
      std::size_t i = 0;
      for (const auto& port : c.children) {
        if (port.name != "port") continue;
        d.provide_ports.push_back({read_port(port, indexed(path, "port", i++))});
      }
    } else if (c.name == "uses") {
      std::string path = indexed("component", "uses", uses_index++);
      std::size_t i = 0;
      for (const auto& port : c.children) {
        if (port.name != "port") continue;
        std::string ppath = indexed(path, "port", i++);
        UsesPortSpec u;
        u.signature = read_port(port, ppath);
        if (const auto* def = port.attribute("default")) u.default_binding = *def;
        if (const auto* m = port.attribute("mandatory")) {
          if (*m != "true" && *m != "false") {
            throw ValidationError(ppath + "/@mandatory",
                                  "expected true or false, got '" + *m + "'");
          }
          u.mandatory = *m == "true";
        } else {
          u.mandatory = !u.default_binding.has_value();
        }
        d.uses_ports.push_back(std::move(u));
      }
    } else if (c.name == "skin") {
      d.skin_ref = required(c, "ref", "component/skin");
    } else {
      d.extensions.push_back(c);
    }
  }
  auto problems = validate_descriptor(d);
  if (!problems.empty()) {
    throw ValidationError(problems.front().path, problems.front().message);
  }
  return d;
}

ComponentDescriptor parse_descriptor(std::string_view text,
                                     const SchemaRegistry& registry) {
  return descriptor_from_document(parse_document(text, registry));
}

Document descriptor_to_document(const ComponentDescriptor& d) {
  Document doc;
  doc.schema_id = d.schema_id;
  Element& root = doc.root;
  root.name = "component";
  root.attributes = {{"id", d.id}, {"version", d.version}, {"schema", d.schema_id.str()}};
  if (!d.doc.empty()) root.children.push_back(doc_element(d.doc));
  Element provide{"provide", {}, {}, {}};
  for (const auto& p : d.provide_ports) {
    provide.children.push_back(write_port(p.signature, {}));
  }
  root.children.push_back(std::move(provide));
  if (!d.uses_ports.empty()) {
    Element uses{"uses", {}, {}, {}};
    for (const auto& u : d.uses_ports) {
      std::vector<std::pair<std::string, std::string>> extra{
          {"mandatory", u.mandatory ? "true" : "false"}};
      if (u.default_binding) extra.emplace_back("default", *u.default_binding);
      uses.children.push_back(write_port(u.signature, std::move(extra)));
    }
    root.children.push_back(std::move(uses));
  }
  if (d.skin_ref) root.children.push_back(Element{"skin", {{"ref", *d.skin_ref}}, {}, {}});
  for (const auto& e : d.extensions) root.children.push_back(e);
  return doc;
}

std::string serialize_descriptor(const ComponentDescriptor& d) {
  return write_document(descriptor_to_document(d));
}

}  // namespace modweave
