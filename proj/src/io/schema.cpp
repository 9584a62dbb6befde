#include "modweave/io/schema.hpp"

#include <sstream>

#include "modweave/io/xml.hpp"

namespace modweave {

namespace {

std::set<std::string> words(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.insert(w == "." ? "" : w);
  return out;
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ' ';
    out += s.empty() ? "." : s;
  }
  return out;
}

ElementRule rule(std::set<std::string> parents, std::set<std::string> attrs,
                 bool text = false) {
  return ElementRule{std::move(attrs), std::move(parents), text};
}

SchemaDefinition core_schema() {
  SchemaDefinition def{kCoreSchema, std::nullopt, {}};
  auto& e = def.elements;
  e["component"] = rule({""}, {"id", "version", "schema"});
  e["doc"] = rule({"component", "port", "param"}, {}, true);
  e["provide"] = rule({"component"}, {});
  e["uses"] = rule({"component"}, {});
  e["port"] = rule({"provide", "uses"}, {"name", "mandatory", "default"});
  e["param"] = rule({"port"}, {"name", "type", "mode"});
  e["return"] = rule({"port"}, {"type"});
  e["skin"] = rule({"component"}, {"ref"});
  e["project"] = rule({""}, {"schema", "root"});
  e["instance"] = rule({"project"}, {"id", "component", "version", "synthesized"});
  e["check"] = rule({"instance"}, {"port"});
  e["bind"] = rule({"project"}, {"parent", "uses", "child", "provide", "synthesized"});
  e["pipe"] = rule({"project"},
                   {"from", "fromPort", "fromParam", "to", "toPort", "toParam"});
  e["route"] = rule({"project"}, {"connector", "from", "fromPort", "fromParam",
                                  "to", "toPort", "toParam"});
  return def;
}

SchemaDefinition layout_schema() {
  SchemaDefinition def{kLayoutSchema, kCoreSchema, {}};
  def.elements["instance"] = rule({}, {"x", "y"});
  def.elements["project"] = rule({}, {"zoom"});
  return def;
}

std::string child_path(const std::string& parent, const Element& child,
                       const Element& parent_element) {
  int index = 0;
  for (const auto& c : parent_element.children) {
    if (c.name == child.name) ++index;
    if (&c == &child) break;
  }
  return parent + "/" + child.name + "[" + std::to_string(index) + "]";
}

void validate_element(const Element& e, const std::string& parent_name,
                      const std::string& path, const ElementRules& rules,
                      const SchemaId& schema, std::vector<Diagnostic>& out) {
  auto it = rules.find(e.name);
  if (it == rules.end()) {
    out.push_back({Severity::Error, path,
                   "element <" + e.name + "> is not defined by " + schema.str()});
    return;
  }
  const ElementRule& r = it->second;
  if (!r.parents.count(parent_name)) {
    out.push_back({Severity::Error, path,
                   "element <" + e.name + "> is not allowed " +
                       (parent_name.empty() ? std::string("as the root")
                                            : "inside <" + parent_name + ">")});
  }
  for (const auto& [k, v] : e.attributes) {
    if (!r.attributes.count(k)) {
      out.push_back({Severity::Error, path + "/@" + k,
                     "attribute '" + k + "' is not allowed on <" + e.name +
                         "> by " + schema.str()});
    }
  }
  if (!r.text && e.children.empty() &&
      e.text.find_first_not_of(" \t\r\n") != std::string::npos) {
    out.push_back({Severity::Error, path,
                   "element <" + e.name + "> does not carry text"});
  }
  for (const auto& c : e.children) {
    validate_element(c, e.name, child_path(path, c, e), rules, schema, out);
  }
}

void strip(Element& e, const ElementRules& rules) {
  const ElementRule& r = rules.at(e.name);
  std::erase_if(e.attributes,
                [&](const auto& kv) { return !r.attributes.count(kv.first); });
  if (!r.text) e.text.clear();
  std::erase_if(e.children, [&](const Element& c) {
    auto it = rules.find(c.name);
    return it == rules.end() || !it->second.parents.count(e.name);
  });
  for (auto& c : e.children) strip(c, rules);
}

}  // namespace

SchemaRegistry SchemaRegistry::with_builtins() {
  SchemaRegistry reg;
  reg.add(core_schema());
  reg.add(layout_schema());
  return reg;
}

void SchemaRegistry::add(SchemaDefinition def) {
  if (contains(def.id)) {
    throw SchemaError("schema " + def.id.str() + " is already registered");
  }
  if (def.parent) {
    if (!contains(*def.parent)) {
      throw SchemaError("schema " + def.id.str() + " extends unregistered " +
                        def.parent->str());
    }
    ElementRules inherited = effective_rules(*def.parent);
    for (const auto& [name, r] : def.elements) {
      auto it = inherited.find(name);
      if (it != inherited.end() && r.text != it->second.text) {
        throw SchemaError("schema " + def.id.str() + " changes the content of <" +
                          name + "> inherited from " + def.parent->str());
      }
      if (it == inherited.end() && r.parents.empty()) {
        throw SchemaError("schema " + def.id.str() + " adds <" + name +
                          "> without any allowed parent");
      }
    }
  }
  SchemaId id = def.id;
  schemas_.emplace(std::move(id), std::move(def));
}

const SchemaDefinition& SchemaRegistry::get(const SchemaId& id) const {
  auto it = schemas_.find(id);
  if (it == schemas_.end()) {
    throw SchemaError("schema " + id.str() + " is not registered");
  }
  return it->second;
}

std::vector<SchemaId> SchemaRegistry::ids() const {
  std::vector<SchemaId> out;
  for (const auto& [id, def] : schemas_) out.push_back(id);
  return out;
}

std::vector<SchemaId> SchemaRegistry::ancestry(const SchemaId& id) const {
  std::vector<SchemaId> chain;
  const SchemaDefinition* def = &get(id);
  while (true) {
    chain.push_back(def->id);
    if (!def->parent) break;
    def = &get(*def->parent);
  }
  return chain;
}

bool SchemaRegistry::is_ancestor_or_self(const SchemaId& ancestor,
                                         const SchemaId& of) const {
  for (const auto& a : ancestry(of)) {
    if (a == ancestor) return true;
  }
  return false;
}

ElementRules SchemaRegistry::effective_rules(const SchemaId& id) const {
  ElementRules out;
  auto chain = ancestry(id);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    for (const auto& [name, r] : get(*it).elements) {
      ElementRule& target = out[name];
      target.attributes.insert(r.attributes.begin(), r.attributes.end());
      target.parents.insert(r.parents.begin(), r.parents.end());
      target.text = target.text || r.text;
    }
  }
  return out;
}

SchemaRegistry load_schema_registry(std::string_view text, SchemaRegistry base) {
  Element root = xml::parse(text);
  if (root.name != "schemas") {
    throw ValidationError("schemas", "expected <schemas> root, got <" +
                                         root.name + ">");
  }
  std::vector<SchemaDefinition> pending;
  for (std::size_t i = 0; i < root.children.size(); ++i) {
    const Element& s = root.children[i];
    std::string path = "schemas/schema[" + std::to_string(i + 1) + "]";
    if (s.name != "schema") {
      throw ValidationError(path, "unexpected <" + s.name + ">");
    }
    const std::string* id = s.attribute("id");
    if (!id) throw ValidationError(path + "/@id", "missing schema id");
    SchemaDefinition def;
    def.id = SchemaId::parse(*id);
    if (const auto* ext = s.attribute("extends")) def.parent = SchemaId::parse(*ext);
    for (const auto& e : s.children) {
      const std::string* name = e.attribute("name");
      if (e.name != "element" || !name) {
        throw ValidationError(path, "expected <element name=...>");
      }
      ElementRule r;
      if (const auto* a = e.attribute("attributes")) r.attributes = words(*a);
      if (const auto* p = e.attribute("parents")) r.parents = words(*p);
      if (const auto* t = e.attribute("text")) r.text = *t == "true";
      def.elements[*name] = std::move(r);
    }
    pending.push_back(std::move(def));
  }
  // Register parents before children; anything left over is a cycle or an
  // unknown parent.
  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      if (!it->parent || base.contains(*it->parent)) {
        base.add(std::move(*it));
        it = pending.erase(it);
        progressed = true;
      } else {
        ++it;
      }
    }
    if (!progressed) {
      throw SchemaError("schema " + pending.front().id.str() +
                        " extends an unknown schema or forms a cycle");
    }
  }
  return base;
}

std::string write_schema_registry(const SchemaRegistry& registry) {
  Element root{"schemas", {}, {}, {}};
  for (const auto& id : registry.ids()) {
    const auto& def = registry.get(id);
    Element s{"schema", {{"id", id.str()}}, {}, {}};
    if (def.parent) s.attributes.emplace_back("extends", def.parent->str());
    for (const auto& [name, r] : def.elements) {
      s.children.push_back(Element{"element",
                                   {{"name", name},
                                    {"parents", join(r.parents)},
                                    {"attributes", join(r.attributes)},
                                    {"text", r.text ? "true" : "false"}},
                                   {},
                                   {}});
    }
    root.children.push_back(std::move(s));
  }
  return xml::write(root);
}

std::vector<Diagnostic> validate_document(const Document& doc,
                                          const SchemaRegistry& registry) {
  std::vector<Diagnostic> out;
  if (!registry.contains(doc.schema_id)) {
    out.push_back({Severity::Error, doc.root.name + "/@schema",
                   "schema " + doc.schema_id.str() + " is not registered"});
    return out;
  }
  if (const auto* declared = doc.root.attribute("schema")) {
    if (*declared != doc.schema_id.str()) {
      out.push_back({Severity::Error, doc.root.name + "/@schema",
                     "root declares " + *declared + " but document is " +
                         doc.schema_id.str()});
    }
  }
  validate_element(doc.root, "", doc.root.name,
                   registry.effective_rules(doc.schema_id), doc.schema_id, out);
  return out;
}

Document parse_document(std::string_view text, const SchemaRegistry& registry) {
  Document doc;
  doc.root = xml::parse(text);
  if (const auto* s = doc.root.attribute("schema")) {
    try {
      doc.schema_id = SchemaId::parse(*s);
    } catch (const ParseError& e) {
      throw ValidationError(doc.root.name + "/@schema", e.what());
    }
  }
  auto diagnostics = validate_document(doc, registry);
  if (!diagnostics.empty()) {
    throw ValidationError(diagnostics.front().path, diagnostics.front().message);
  }
  return doc;
}

std::string write_document(const Document& doc) { return xml::write(doc.root); }

SchemaId schema_gcd(const SchemaId& a, const SchemaId& b,
                    const SchemaRegistry& registry) {
  auto chain_b = registry.ancestry(b);
  for (const auto& candidate : registry.ancestry(a)) {
    for (const auto& other : chain_b) {
      if (candidate == other) return candidate;
    }
  }
  throw SchemaError("schemas " + a.str() + " and " + b.str() +
                    " have no common ancestor");
}

Document project_to_schema(const Document& doc, const SchemaId& target,
                           const SchemaRegistry& registry) {
  if (!registry.is_ancestor_or_self(target, doc.schema_id)) {
    throw SchemaError("cannot project " + doc.schema_id.str() + " onto " +
                      target.str() + ": not an ancestor");
  }
  ElementRules rules = registry.effective_rules(target);
  auto root_rule = rules.find(doc.root.name);
  if (root_rule == rules.end() || !root_rule->second.parents.count("")) {
    throw SchemaError("root <" + doc.root.name + "> is not defined by " +
                      target.str());
  }
  Document out = doc;
  out.schema_id = target;
  strip(out.root, rules);
  if (doc.root.attribute("schema")) out.root.set_attribute("schema", target.str());
  return out;
}

}  // namespace modweave
