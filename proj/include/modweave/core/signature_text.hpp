#pragma once

#include <string>
#include <string_view>

#include "modweave/core/descriptor.hpp"

namespace modweave {

// Compact one-line signature text used in queries and CLI flags:
//   name(in a:real, out b:int) -> real
// Mode defaults to `in` and the return clause to `-> void` when omitted.
std::string format_signature(const PortSignature& sig);
PortSignature parse_signature(std::string_view text);

}  // namespace modweave
