#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "modweave/compat/compat.hpp"
#include "modweave/core/descriptor.hpp"
#include "modweave/frontage/session.hpp"
#include "modweave/registry/store.hpp"
#include "modweave/runtime/engine.hpp"

namespace httplib {
class Server;
}

namespace modweave {

using Json = nlohmann::ordered_json;

Json param_to_json(const ParamSpec& p);
Json signature_to_json(const PortSignature& sig);
Json descriptor_to_json(const ComponentDescriptor& d);
Json report_to_json(const CompatReport& r);
Json diagnostics_to_json(const std::vector<Diagnostic>& ds);

struct ServiceOptions {
  RunOptions run;
  std::size_t max_undo = 100;
};

// HTTP API over a package source and in-memory project sessions.
// Request bodies are JSON except projects, which travel as canonical XML.
class Service {
 public:
  Service(const PackageSource& packages, ServiceOptions options = {});

  void mount(httplib::Server& server);
  SessionManager& sessions() { return sessions_; }

 private:
  const PackageSource& packages_;
  ServiceOptions options_;
  SessionManager sessions_;
};

// Blocks serving on host:port. Returns false when the port cannot be bound.
bool serve(const PackageSource& packages, const std::string& host, int port,
           ServiceOptions options = {});

}  // namespace modweave
