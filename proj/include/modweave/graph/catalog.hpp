#pragma once

#include <map>
#include <optional>
#include <vector>

#include "modweave/core/descriptor.hpp"

namespace modweave {

// Read access to component descriptors by id + exact version.
class Catalog {
 public:
  virtual ~Catalog() = default;
  virtual std::optional<ComponentDescriptor> find(const ComponentRef& ref) const = 0;
};

class DescriptorSet : public Catalog {
 public:
  DescriptorSet() = default;
  explicit DescriptorSet(std::vector<ComponentDescriptor> descriptors);

  void add(ComponentDescriptor d);
  std::optional<ComponentDescriptor> find(const ComponentRef& ref) const override;
  std::vector<ComponentDescriptor> all() const;

 private:
  std::map<ComponentRef, ComponentDescriptor> items_;
};

// First hit wins, in the order given. Does not own the catalogs.
class ChainedCatalog : public Catalog {
 public:
  explicit ChainedCatalog(std::vector<const Catalog*> chain) : chain_(std::move(chain)) {}
  std::optional<ComponentDescriptor> find(const ComponentRef& ref) const override;

 private:
  std::vector<const Catalog*> chain_;
};

// The built-in single-slot connector synthesized for each lowered pipe:
// put(in value:T) -> void and get() -> T.
inline const ComponentRef kConnectorRef{"org.modweave.connector", "1"};
ComponentDescriptor connector_descriptor(const TypeSpec& value_type);

}  // namespace modweave
