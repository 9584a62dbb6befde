#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "modweave/core/descriptor.hpp"
#include "modweave/core/element.hpp"
#include "modweave/core/error.hpp"
#include "modweave/core/schema_id.hpp"

namespace modweave {

class SchemaError : public Error {
 public:
  using Error::Error;
};

// Allow-list entry for one element name. An empty-string parent stands for
// the document root.
struct ElementRule {
  std::set<std::string> attributes;
  std::set<std::string> parents;
  bool text = false;

  friend bool operator==(const ElementRule&, const ElementRule&) = default;
};

using ElementRules = std::map<std::string, ElementRule>;

// One schema's own contribution; the effective allow-list is the union of
// the contributions along its ancestor chain.
struct SchemaDefinition {
  SchemaId id;
  std::optional<SchemaId> parent;
  ElementRules elements;
};

struct Document {
  SchemaId schema_id = kCoreSchema;
  Element root;

  friend bool operator==(const Document&, const Document&) = default;
};

// Schemas form a forest under "extends". Children can only add elements,
// attributes or parents; turning a parent's element into a text element (or
// back) is rejected, so every child document projects cleanly onto its
// ancestors.
class SchemaRegistry {
 public:
  // comodi.core/1 plus comodi.gui.layout/1.
  static SchemaRegistry with_builtins();

  void add(SchemaDefinition def);

  bool contains(const SchemaId& id) const { return schemas_.count(id) != 0; }
  const SchemaDefinition& get(const SchemaId& id) const;
  std::vector<SchemaId> ids() const;

  // `id` first, root last.
  std::vector<SchemaId> ancestry(const SchemaId& id) const;
  bool is_ancestor_or_self(const SchemaId& ancestor, const SchemaId& of) const;
  ElementRules effective_rules(const SchemaId& id) const;

 private:
  std::map<SchemaId, SchemaDefinition> schemas_;
};

// schemas.xml:
//   <schemas>
//     <schema id="acme.gui/1" extends="comodi.core/1">
//       <element name="style" parents="component" attributes="color" text="false"/>
//     </schema>
//   </schemas>
// Entries may appear in any order. Loaded on top of `base`.
SchemaRegistry load_schema_registry(std::string_view text,
                                    SchemaRegistry base = SchemaRegistry::with_builtins());
std::string write_schema_registry(const SchemaRegistry& registry);

std::vector<Diagnostic> validate_document(const Document& doc,
                                          const SchemaRegistry& registry);

// Reads the root's "schema" attribute (core/1 when absent) and validates.
// Throws ParseError for malformed XML, ValidationError for schema problems.
Document parse_document(std::string_view text, const SchemaRegistry& registry);
std::string write_document(const Document& doc);

// Deepest schema that is ancestor-or-self of both.
SchemaId schema_gcd(const SchemaId& a, const SchemaId& b,
                    const SchemaRegistry& registry);

// Strips every element and attribute the target schema does not allow.
Document project_to_schema(const Document& doc, const SchemaId& target,
                           const SchemaRegistry& registry);

}  // namespace modweave
