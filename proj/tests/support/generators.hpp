#pragma once

#include <random>
#include <string>
#include <vector>

#include "modweave/core/value.hpp"
#include "modweave/graph/catalog.hpp"
#include "modweave/graph/project.hpp"
#include "modweave/runtime/provider.hpp"

namespace mwtest {

using Rng = std::mt19937_64;

int pick(Rng& rng, int lo, int hi);  // inclusive
bool chance(Rng& rng, double p);

modweave::TypeSpec random_type(Rng& rng, int depth = 2);
modweave::Value random_value(Rng& rng, const modweave::TypeSpec& type);
modweave::PortSignature random_signature(Rng& rng, const std::string& name, int max_params = 4);

// Valid under validate_descriptor; docs include XML metacharacters.
modweave::ComponentDescriptor random_descriptor(Rng& rng);

// Structurally well-formed for the project file format; graph rules are not
// guaranteed. Layout hints appear only under the layout schema.
modweave::Project random_project(Rng& rng);

// A runnable project over built-in behaviors only: nested seq_drivers with
// constant, unary, producer and consumer leaves, some defaulted uses ports,
// and pipes from producers to later consumers among the same siblings.
struct BuiltinWorld {
  modweave::DescriptorSet catalog;
  modweave::ProviderTable providers;
  modweave::Project project;
  std::string entry;
  std::vector<modweave::Value> args;
};
BuiltinWorld random_builtin_world(Rng& rng, int max_instances = 20, int max_pipes = 5);

}  // namespace mwtest
