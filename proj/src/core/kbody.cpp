#include "modweave/core/kbody.hpp"

#include "modweave/core/error.hpp"

namespace modweave {

namespace {

void check_domain(int n, int k) {
  if (k < 1 || n > 12 || k > n) {
    throw DomainError("kbody requires 1 <= k <= n <= 12, got n=" +
                      std::to_string(n) + " k=" + std::to_string(k));
  }
}

}  // namespace

std::uint64_t kbody_port_count(int n, int k) {
  check_domain(n, k);
  std::uint64_t num = 1;
  std::uint64_t den = 1;
  for (int i = 1; i <= n; ++i) num *= static_cast<std::uint64_t>(i);
  for (int i = 1; i <= n - k; ++i) den *= static_cast<std::uint64_t>(i);
  for (int i = 1; i <= k; ++i) den *= static_cast<std::uint64_t>(i);
  return num / den;
}

std::vector<std::vector<std::string>> kbody_label_sets(int n, int k) {
  check_domain(n, k);
  std::vector<std::vector<std::string>> out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    std::vector<std::string> labels;
    for (int e : pick) labels.push_back("E" + std::to_string(e));
    out.push_back(std::move(labels));
    // Advance to the next combination in lexicographic order.
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::string kbody_default_name(const std::vector<std::string>& labels) {
  std::string name = "default";
  for (const auto& l : labels) name += "_" + l;
  return name;
}

ComponentDescriptor make_kbody_component(int n, int k) {
  check_domain(n, k);
  ComponentDescriptor d;
  d.id = "org.modweave.demo.kbody.n" + std::to_string(n) + ".k" +
         std::to_string(k);
  d.version = "1.0";
  d.doc = std::to_string(k) + "-body interactions among " + std::to_string(n) +
          " chemical elements";

  ParamSpec energy{"energy", TypeSpec::real_type(), ParamMode::In,
                   "accumulated energy"};
  PortSignature simulate{"simulate", {energy}, TypeSpec::real_type(),
                         "run the simulation step"};
  d.provide_ports.push_back({simulate});

  for (const auto& labels : kbody_label_sets(n, k)) {
    std::string name = "interaction";
    std::string doc = "interaction among";
    for (const auto& l : labels) {
      name += "_" + l;
      doc += " " + l;
    }
    UsesPortSpec port;
    port.signature = PortSignature{name, {energy}, TypeSpec::real_type(), doc};
    port.mandatory = false;
    port.default_binding = kbody_default_name(labels);
    d.uses_ports.push_back(std::move(port));
  }
  return d;
}

}  // namespace modweave
