#include "modweave/io/project_io.hpp"

#include <charconv>

namespace modweave {

namespace {

const std::string& required(const Element& e, const char* attr, const std::string& path) {
  const std::string* v = e.attribute(attr);
  if (v == nullptr) {
    throw ValidationError(path + "/@" + attr,
                          std::string("missing required attribute '") + attr + "'");
  }
  return *v;
}

double number_attr(const Element& e, const char* attr, const std::string& path) {
  const std::string* v = e.attribute(attr);
  if (v == nullptr) return 0;
  double out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ValidationError(path + "/@" + attr, "'" + *v + "' is not a number");
  }
  return out;
}

bool flag_attr(const Element& e, const char* attr, const std::string& path) {
  const std::string* v = e.attribute(attr);
  if (v == nullptr) return false;
  if (*v != "true" && *v != "false") {
    throw ValidationError(path + "/@" + attr, "expected true or false");
  }
  return *v == "true";
}

PipeEdge read_edge(const Element& e, const std::string& path) {
  return PipeEdge{required(e, "from", path),    required(e, "fromPort", path),
                  required(e, "fromParam", path), required(e, "to", path),
                  required(e, "toPort", path),  required(e, "toParam", path)};
}

void write_edge(Element& e, const PipeEdge& edge) {
  e.attributes.emplace_back("from", edge.from);
  e.attributes.emplace_back("fromPort", edge.from_port);
  e.attributes.emplace_back("fromParam", edge.from_param);
  e.attributes.emplace_back("to", edge.to);
  e.attributes.emplace_back("toPort", edge.to_port);
  e.attributes.emplace_back("toParam", edge.to_param);
}

bool carries_layout(const SchemaId& schema) {
  const auto& reg = default_schema_registry();
  return reg.contains(schema) && reg.is_ancestor_or_self(kLayoutSchema, schema);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Project project_from_document(const Document& doc) {
  const Element& root = doc.root;
  if (root.name != "project") {
    throw ValidationError(root.name, "expected <project> root");
  }
  Project p;
  p.schema_id = doc.schema_id;
  if (const auto* r = root.attribute("root")) p.root = *r;
  if (root.attribute("zoom")) p.zoom = number_attr(root, "zoom", "project");
  std::map<std::string, std::size_t> counters;
  for (const auto& c : root.children) {
    std::string path =
        "project/" + c.name + "[" + std::to_string(++counters[c.name]) + "]";
    if (c.name == "instance") {
      InstanceNode node;
      node.id = required(c, "id", path);
      node.component = {required(c, "component", path), required(c, "version", path)};
      node.synthesized = flag_attr(c, "synthesized", path);
      for (const auto& check : c.children) {
        if (check.name == "check") {
          node.external_ports.insert(required(check, "port", path + "/check"));
        }
      }
      if (c.attribute("x") || c.attribute("y")) {
        p.layout[node.id] = LayoutHint{number_attr(c, "x", path), number_attr(c, "y", path)};
      }
      p.instances.push_back(std::move(node));
    } else if (c.name == "bind") {
      p.bindings.push_back(Binding{required(c, "parent", path), required(c, "uses", path),
                                   required(c, "child", path), required(c, "provide", path),
                                   flag_attr(c, "synthesized", path)});
    } else if (c.name == "pipe") {
      p.pipes.push_back(read_edge(c, path));
    } else if (c.name == "route") {
      p.routes.push_back(ConnectorRoute{required(c, "connector", path), read_edge(c, path)});
    } else {
      p.extensions.push_back(c);
    }
  }
  if (p.root.empty() && !p.instances.empty()) {
    throw ValidationError("project/@root", "missing required attribute 'root'");
  }
  return p;
}

Project parse_project(std::string_view text, const SchemaRegistry& registry) {
  return project_from_document(parse_document(text, registry));
}

Document project_to_document(const Project& p) {
  Document doc;
  doc.schema_id = p.schema_id;
  Element& root = doc.root;
  root.name = "project";
  root.attributes = {{"schema", p.schema_id.str()}};
  if (!p.root.empty()) root.attributes.emplace_back("root", p.root);
  const bool layout = carries_layout(p.schema_id);
  if (layout && p.zoom) root.attributes.emplace_back("zoom", format_number(*p.zoom));
  for (const auto& node : p.instances) {
    Element e{"instance",
              {{"id", node.id},
               {"component", node.component.id},
               {"version", node.component.version}},
              {},
              {}};
    if (node.synthesized) e.attributes.emplace_back("synthesized", "true");
    if (layout) {
      if (auto it = p.layout.find(node.id); it != p.layout.end()) {
        e.attributes.emplace_back("x", format_number(it->second.x));
        e.attributes.emplace_back("y", format_number(it->second.y));
      }
    }
    for (const auto& port : node.external_ports) {
      e.children.push_back(Element{"check", {{"port", port}}, {}, {}});
    }
    root.children.push_back(std::move(e));
  }
  for (const auto& b : p.bindings) {
    Element e{"bind",
              {{"parent", b.parent}, {"uses", b.uses}, {"child", b.child}, {"provide", b.provide}},
              {},
              {}};
    if (b.synthesized) e.attributes.emplace_back("synthesized", "true");
    root.children.push_back(std::move(e));
  }
  for (const auto& edge : p.pipes) {
    Element e{"pipe", {}, {}, {}};
    write_edge(e, edge);
    root.children.push_back(std::move(e));
  }
  for (const auto& r : p.routes) {
    Element e{"route", {{"connector", r.connector}}, {}, {}};
    write_edge(e, r.pipe);
    root.children.push_back(std::move(e));
  }
  for (const auto& e : p.extensions) root.children.push_back(e);
  return doc;
}

std::string serialize_project(const Project& p) {
  return write_document(project_to_document(p));
}

}  // namespace modweave
