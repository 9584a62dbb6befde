#pragma once

#include "modweave/graph/project.hpp"
#include "modweave/registry/store.hpp"

namespace modweave {

// Built-in packages: the const/add demo parts, the components of the
// four-level framework example, and kbody components generated on demand
// from ids of the form org.modweave.demo.kbody.n<N>.k<K> (version 1.0).
class StdLibrary : public PackageSource {
 public:
  std::vector<ComponentRef> list() const override;
  std::optional<ComponentPackage> get(const ComponentRef& ref) const override;
};

const StdLibrary& std_library();

// Package for make_kbody_component(n, k): seq_driver over all uses ports,
// every default exported as `neg`.
ComponentPackage kbody_package(int n, int k);

// Root seq_driver calling two producers and an adder wired by two pipes;
// entry "run" returns 5.
Project make_sum_demo_project(const Catalog& catalog);

// C1 framework with C2 init, C3 solver (C3.1 step piped into C3.2 finish)
// and C4 report (C4.1 sink); entry "run" returns -1.5.
Project make_fig_project(const Catalog& catalog);

}  // namespace modweave
