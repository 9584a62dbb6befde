#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modweave/core/descriptor.hpp"

namespace modweave {

// Number of k-subsets of n labels, n! / ((n - k)! k!).
std::uint64_t kbody_port_count(int n, int k);

// Element labels "E1".."En" grouped into every k-subset, lexicographic.
std::vector<std::vector<std::string>> kbody_label_sets(int n, int k);

// A k-body interaction component for n chemical elements: one optional uses
// port per k-subset of elements, each defaulted to an internal behavior, and
// a single provide port "simulate". Requires 1 <= k <= n <= 12.
ComponentDescriptor make_kbody_component(int n, int k);

// Name of the internal behavior backing each uses port of a kbody component.
std::string kbody_default_name(const std::vector<std::string>& labels);

}  // namespace modweave
