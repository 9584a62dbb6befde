#pragma once

#include <string>
#include <string_view>

#include "modweave/core/element.hpp"

namespace modweave::xml {

// Parses a UTF-8 XML document into an element tree. Whitespace between
// elements is dropped; mixed content is rejected. Throws ParseError with the
// line and column of the first problem.
Element parse(std::string_view text);

// Canonical text: XML declaration, 2-space indent, attributes in stored
// order, leaf text inline, trailing newline.
std::string write(const Element& root);

std::string escape(std::string_view text, bool in_attribute);

}  // namespace modweave::xml
