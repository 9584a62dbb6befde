#pragma once

#include <string>
#include <string_view>

#include "modweave/graph/project.hpp"
#include "modweave/io/descriptor_io.hpp"
#include "modweave/io/schema.hpp"

namespace modweave {

// `*.project.xml` reader; layout hints come from comodi.gui.layout/1.
// Checks file structure only; graph rules are validate_project's job.
Project parse_project(std::string_view text,
                      const SchemaRegistry& registry = default_schema_registry());
Project project_from_document(const Document& doc);

std::string serialize_project(const Project& p);
Document project_to_document(const Project& p);

// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace modweave
