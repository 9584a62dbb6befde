#include "modweave/core/signature_text.hpp"

#include <cctype>

#include "modweave/core/error.hpp"

namespace modweave {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits on commas that are not nested inside (), {}.
std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

}  // namespace

std::string format_signature(const PortSignature& sig) {
  std::string out = sig.name + "(";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    const auto& p = sig.params[i];
    if (i) out += ", ";
    out += std::string(to_string(p.mode)) + " " + p.name + ":" +
           format_type(p.type);
  }
  return out + ") -> " + format_type(sig.return_type);
}

PortSignature parse_signature(std::string_view text) {
  std::string_view s = trim(text);
  auto open = s.find('(');
  if (open == std::string_view::npos) {
    throw ParseError("signature '" + std::string(text) + "' lacks '('");
  }
  // Matching close paren for the parameter list.
  int depth = 0;
  std::size_t close = std::string_view::npos;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string_view::npos) {
    throw ParseError("signature '" + std::string(text) + "' lacks ')'");
  }
  PortSignature sig;
  sig.name = std::string(trim(s.substr(0, open)));
  std::string_view params = trim(s.substr(open + 1, close - open - 1));
  if (!params.empty()) {
    for (std::string_view part : split_top_level(params)) {
      part = trim(part);
      ParamSpec p;
      auto space = part.find(' ');
      if (space != std::string_view::npos) {
        auto mode = parse_param_mode(part.substr(0, space));
        if (mode) {
          p.mode = *mode;
          part = trim(part.substr(space + 1));
        }
      }
      auto colon = part.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("parameter '" + std::string(part) + "' lacks a type");
      }
      p.name = std::string(trim(part.substr(0, colon)));
      p.type = parse_type(trim(part.substr(colon + 1)));
      sig.params.push_back(std::move(p));
    }
  }
  std::string_view rest = trim(s.substr(close + 1));
  if (!rest.empty()) {
    if (rest.substr(0, 2) != "->") {
      throw ParseError("signature '" + std::string(text) +
                       "': expected '->' after parameters");
    }
    sig.return_type = parse_type(trim(rest.substr(2)));
  }
  return sig;
}

}  // namespace modweave
