#pragma once

#include <string>
#include <string_view>

#include "modweave/core/descriptor.hpp"
#include "modweave/io/schema.hpp"

namespace modweave {

// Process-wide registry holding the built-in schemas. Read-only.
const SchemaRegistry& default_schema_registry();

// `*.component.xml` reader. Throws ParseError on malformed XML and
// ValidationError (with an element path such as "component/@id") when the
// document breaks its schema or the descriptor invariants.
ComponentDescriptor parse_descriptor(
    std::string_view text,
    const SchemaRegistry& registry = default_schema_registry());
ComponentDescriptor descriptor_from_document(const Document& doc);

// Canonical form; parse_descriptor(serialize_descriptor(d)) == d.
std::string serialize_descriptor(const ComponentDescriptor& d);
Document descriptor_to_document(const ComponentDescriptor& d);

}  // namespace modweave
