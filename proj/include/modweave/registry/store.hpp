#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "modweave/compat/compat.hpp"
#include "modweave/graph/catalog.hpp"
#include "modweave/registry/package.hpp"
#include "modweave/runtime/provider.hpp"

namespace modweave {

// Anything that hands out packages also serves descriptors and providers.
class PackageSource : public Catalog, public ProviderSource {
 public:
  virtual std::vector<ComponentRef> list() const = 0;
  virtual std::optional<ComponentPackage> get(const ComponentRef& ref) const = 0;

  std::optional<ComponentDescriptor> find(const ComponentRef& ref) const override;
  std::optional<BehaviorProvider> provider_for(const ComponentRef& ref) const override;
};

// Directory store: <root>/<id>/<version>/{descriptor.component.xml,
// manifest.xml, skin.xml}. Readers take no lock; install holds an exclusive
// lock on <root>/.lock and publishes the version directory by rename.
class ComponentStore : public PackageSource {
 public:
  explicit ComponentStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Throws RegistryError: Invalid (message names the offending port or
  // path), Duplicate, Io.
  ComponentRef install(const ComponentPackage& pkg);

  std::vector<ComponentRef> list() const override;
  std::optional<ComponentPackage> get(const ComponentRef& ref) const override;

 private:
  std::filesystem::path root_;
};

// Earlier sources shadow later ones. Does not own the sources.
class ChainedSource : public PackageSource {
 public:
  explicit ChainedSource(std::vector<const PackageSource*> chain) : chain_(std::move(chain)) {}
  std::vector<ComponentRef> list() const override;
  std::optional<ComponentPackage> get(const ComponentRef& ref) const override;

 private:
  std::vector<const PackageSource*> chain_;
};

struct SearchHit {
  ComponentRef ref;
  std::string doc;
  int score = 0;
  // Provide ports compatible with the filter; empty without one.
  std::vector<std::string> matching_ports;
};

// Case-insensitive substring match over id, short name (last id label),
// provide port names and doc. Ordered by score, then id, then version.
// With a filter only components offering a compatible provide port remain.
std::vector<SearchHit> search(const PackageSource& source, const std::string& query,
                              const std::optional<PortSignature>& filter = std::nullopt,
                              const CompatPolicy& policy = CompatPolicy{true, false});

// First installed skin whose ref matches, else default_skin().
SkinSpec resolve_skin(const PackageSource& source, const std::string& ref);

}  // namespace modweave
