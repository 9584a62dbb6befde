#include "modweave/graph/catalog.hpp"

namespace modweave {

DescriptorSet::DescriptorSet(std::vector<ComponentDescriptor> descriptors) {
  for (auto& d : descriptors) add(std::move(d));
}

void DescriptorSet::add(ComponentDescriptor d) {
  ComponentRef ref = d.ref();
  items_.insert_or_assign(std::move(ref), std::move(d));
}

std::optional<ComponentDescriptor> DescriptorSet::find(const ComponentRef& ref) const {
  auto it = items_.find(ref);
  if (it == items_.end()) return std::nullopt;
  return it->second;
}

std::vector<ComponentDescriptor> DescriptorSet::all() const {
  std::vector<ComponentDescriptor> out;
  for (const auto& [ref, d] : items_) out.push_back(d);
  return out;
}

std::optional<ComponentDescriptor> ChainedCatalog::find(const ComponentRef& ref) const {
  for (const Catalog* c : chain_) {
    if (auto d = c->find(ref)) return d;
  }
  return std::nullopt;
}

ComponentDescriptor connector_descriptor(const TypeSpec& value_type) {
  ComponentDescriptor d;
  d.id = kConnectorRef.id;
  d.version = kConnectorRef.version;
  d.doc = "single-slot buffer realizing a pipe as two client-server calls";
  d.provide_ports.push_back(
      {PortSignature{"put",
                     {ParamSpec{"value", value_type, ParamMode::In, "value to hold"}},
                     TypeSpec::void_type(),
                     "store the producer's output"}});
  d.provide_ports.push_back(
      {PortSignature{"get", {}, value_type, "hand the held value to the consumer"}});
  return d;
}

}  // namespace modweave
