#include "modweave/io/xml.hpp"

#include <expat.h>

#include <algorithm>
#include <memory>
#include <vector>

#include "modweave/core/error.hpp"

namespace modweave::xml {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

struct TreeBuilder {
  XML_Parser parser = nullptr;
  Element root;
  std::vector<Element*> stack;
  bool have_root = false;
  std::string failure;
  int fail_line = 0;
  int fail_column = 0;

  void fail(std::string message) {
    if (!failure.empty()) return;
    failure = std::move(message);
    fail_line = static_cast<int>(XML_GetCurrentLineNumber(parser));
    fail_column = static_cast<int>(XML_GetCurrentColumnNumber(parser)) + 1;
    XML_StopParser(parser, XML_FALSE);
  }

  static void on_start(void* self_ptr, const XML_Char* name,
                       const XML_Char** attrs) {
    auto* self = static_cast<TreeBuilder*>(self_ptr);
    Element e;
    e.name = name;
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      e.attributes.emplace_back(attrs[i], attrs[i + 1]);
    }
    if (self->stack.empty()) {
      self->root = std::move(e);
      self->have_root = true;
      self->stack.push_back(&self->root);
      return;
    }
    Element* parent = self->stack.back();
    if (!is_blank(parent->text)) {
      self->fail("mixed content in <" + parent->name + "> is not supported");
      return;
    }
    parent->text.clear();
    parent->children.push_back(std::move(e));
    self->stack.push_back(&parent->children.back());
  }

  static void on_end(void* self_ptr, const XML_Char* /*name*/) {
    auto* self = static_cast<TreeBuilder*>(self_ptr);
    if (!self->stack.empty()) self->stack.pop_back();
  }

  static void on_text(void* self_ptr, const XML_Char* s, int len) {
    auto* self = static_cast<TreeBuilder*>(self_ptr);
    if (self->stack.empty()) return;
    Element* current = self->stack.back();
    std::string_view chunk(s, static_cast<std::size_t>(len));
    if (!current->children.empty()) {
      if (!is_blank(chunk)) {
        self->fail("mixed content in <" + current->name +
                   "> is not supported");
      }
      return;
    }
    current->text.append(chunk);
  }
};

void write_element(const Element& e, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += '<';
  out += e.name;
  for (const auto& [k, v] : e.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape(v, true);
    out += '"';
  }
  if (e.children.empty()) {
    if (e.text.empty()) {
      out += "/>\n";
    } else {
      out += '>';
      out += escape(e.text, false);
      out += "</" + e.name + ">\n";
    }
    return;
  }
  out += ">\n";
  for (const auto& c : e.children) write_element(c, depth + 1, out);
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "</" + e.name + ">\n";
}

}  // namespace

Element parse(std::string_view text) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)>
      parser(XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) throw ParseError("cannot allocate XML parser");
  TreeBuilder builder;
  builder.parser = parser.get();
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &TreeBuilder::on_start,
                        &TreeBuilder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &TreeBuilder::on_text);

  auto status = XML_Parse(parser.get(), text.data(),
                          static_cast<int>(text.size()), XML_TRUE);
  if (!builder.failure.empty()) {
    throw ParseError(builder.failure, builder.fail_line, builder.fail_column);
  }
  if (status != XML_STATUS_OK) {
    throw ParseError(XML_ErrorString(XML_GetErrorCode(parser.get())),
                     static_cast<int>(XML_GetCurrentLineNumber(parser.get())),
                     static_cast<int>(XML_GetCurrentColumnNumber(parser.get())) +
                         1);
  }
  if (!builder.have_root) throw ParseError("document has no root element", 1, 1);
  return std::move(builder.root);
}

std::string write(const Element& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  write_element(root, 0, out);
  return out;
}

std::string escape(std::string_view text, bool in_attribute) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += in_attribute ? "&quot;" : "\"";
        break;
      case '\n':
        out += in_attribute ? "&#10;" : "\n";
        break;
      case '\t':
        out += in_attribute ? "&#9;" : "\t";
        break;
      case '\r':
        out += "&#13;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace modweave::xml
