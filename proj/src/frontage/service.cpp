#include "modweave/frontage/service.hpp"

#include <sstream>

#include "httplib.h"
#include "modweave/core/signature_text.hpp"
#include "modweave/io/descriptor_io.hpp"
#include "modweave/io/project_io.hpp"
#include "modweave/runtime/protocol.hpp"

namespace modweave {

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kXml = "application/xml";

// Raised for malformed requests (bad JSON, missing fields).
class BadRequest : public Error {
 public:
  using Error::Error;
};

Json error_body(std::string_view kind, const std::string& message) {
  return Json{{"error", {{"kind", kind}, {"message", message}}}};
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(dump_json(body) + "\n", kJson);
}

int graph_status(GraphErrorKind kind) {
  switch (kind) {
    case GraphErrorKind::UnknownComponent:
    case GraphErrorKind::UnknownInstance:
      return 404;
    case GraphErrorKind::DuplicateId:
    case GraphErrorKind::Cycle:
    case GraphErrorKind::Occupied:
    case GraphErrorKind::AlreadyFed:
    case GraphErrorKind::CheckboxDefault:
    case GraphErrorKind::CheckboxInactive:
      return 409;
    default:
      return 422;
  }
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const SessionError& e) {
      reply(res, e.kind() == SessionErrorKind::NotFound ? 404 : 409,
            error_body(e.kind() == SessionErrorKind::NotFound ? "not-found" : "nothing-to-undo",
                       e.what()));
    } catch (const GraphError& e) {
      Json body = error_body(to_string(e.kind()), e.what());
      if (e.report()) body["report"] = report_to_json(*e.report());
      reply(res, graph_status(e.kind()), body);
    } catch (const RegistryError& e) {
      reply(res, e.kind() == RegistryErrorKind::NotFound ? 404 : 422,
            error_body("registry", e.what()));
    } catch (const BadRequest& e) {
      reply(res, 400, error_body("bad-request", e.what()));
    } catch (const ProtocolError& e) {
      reply(res, 400, error_body("bad-request", e.what()));
    } catch (const ParseError& e) {
      reply(res, 422, error_body("parse", e.what()));
    } catch (const ValidationError& e) {
      reply(res, 422, error_body("validation", e.what()));
    } catch (const RunError& e) {
      reply(res, 422, error_body(to_string(e.kind()), e.what()));
    } catch (const std::exception& e) {
      reply(res, 500, error_body("internal", e.what()));
    }
  };
}

Json parse_body(const httplib::Request& req) {
  try {
    Json j = Json::parse(req.body);
    if (!j.is_object()) throw BadRequest("request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw BadRequest(std::string("malformed JSON body: ") + e.what());
  }
}

std::string field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || !it->is_string()) {
    throw BadRequest(std::string("field '") + name + "' must be a string");
  }
  return it->get<std::string>();
}

bool flag(const Json& j, const char* name, bool fallback) {
  auto it = j.find(name);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw BadRequest(std::string("field '") + name + "' must be a boolean");
  return it->get<bool>();
}

bool query_flag(const httplib::Request& req, const char* name, bool fallback) {
  if (!req.has_param(name)) return fallback;
  std::string v = req.get_param_value(name);
  return v == "1" || v == "true" || v == "yes";
}

PortSignature query_signature(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) throw BadRequest(std::string("query parameter '") + name + "' missing");
  try {
    return parse_signature(req.get_param_value(name));
  } catch (const ParseError& e) {
    throw BadRequest(e.what());
  }
}

CompatPolicy body_policy(const Json& j) {
  return CompatPolicy{flag(j, "widening", true), flag(j, "name_sensitivity", false)};
}

Json optional_param(const std::optional<ParamSpec>& p) {
  return p ? param_to_json(*p) : Json(nullptr);
}

}  // namespace

Json param_to_json(const ParamSpec& p) {
  return Json{{"name", p.name},
              {"type", format_type(p.type)},
              {"mode", to_string(p.mode)},
              {"doc", p.doc}};
}

Json signature_to_json(const PortSignature& sig) {
  Json params = Json::array();
  for (const auto& p : sig.params) params.push_back(param_to_json(p));
  return Json{{"name", sig.name},
              {"params", params},
              {"return", format_type(sig.return_type)},
              {"doc", sig.doc},
              {"text", format_signature(sig)}};
}

Json descriptor_to_json(const ComponentDescriptor& d) {
  Json provides = Json::array();
  for (const auto& p : d.provide_ports) provides.push_back(signature_to_json(p.signature));
  Json uses = Json::array();
  for (const auto& u : d.uses_ports) {
    Json j = signature_to_json(u.signature);
    j["mandatory"] = u.mandatory;
    j["default"] = u.default_binding ? Json(*u.default_binding) : Json(nullptr);
    uses.push_back(std::move(j));
  }
  return Json{{"id", d.id},
              {"version", d.version},
              {"doc", d.doc},
              {"schema", d.schema_id.str()},
              {"skin", d.skin_ref ? Json(*d.skin_ref) : Json(nullptr)},
              {"provide", provides},
              {"uses", uses}};
}

Json report_to_json(const CompatReport& r) {
  Json args = Json::array();
  for (const auto& a : r.arguments) {
    args.push_back(Json{{"position", a.position},
                        {"required", optional_param(a.required)},
                        {"offered", optional_param(a.offered)},
                        {"status", to_string(a.status)},
                        {"reason", a.reason}});
  }
  Json out{{"compatible", r.compatible}, {"arguments", args}};
  if (r.return_entry) {
    out["return"] = Json{{"required", format_type(r.return_entry->required)},
                         {"offered", format_type(r.return_entry->offered)},
                         {"status", to_string(r.return_entry->status)},
                         {"reason", r.return_entry->reason}};
  }
  if (r.arity) {
    out["arity"] =
        Json{{"required", r.arity->required}, {"offered", r.arity->offered}, {"ok", r.arity->ok}};
  }
  return out;
}

Json diagnostics_to_json(const std::vector<Diagnostic>& ds) {
  Json out = Json::array();
  for (const auto& d : ds) {
    out.push_back(Json{{"severity", d.severity == Severity::Error ? "error" : "warning"},
                       {"path", d.path},
                       {"message", d.message}});
  }
  return out;
}

Service::Service(const PackageSource& packages, ServiceOptions options)
    : packages_(packages), options_(std::move(options)), sessions_(options_.max_undo) {}

void Service::mount(httplib::Server& server) {
  const PackageSource& catalog = packages_;
  SessionManager& sessions = sessions_;
  const ServiceOptions& options = options_;

  server.Get("/components", guarded([&](const httplib::Request& req, httplib::Response& res) {
    std::optional<PortSignature> filter;
    if (req.has_param("sig") && !req.get_param_value("sig").empty()) {
      filter = query_signature(req, "sig");
    }
    Json hits = Json::array();
    for (const auto& h : search(catalog, req.get_param_value("q"), filter)) {
      Json ports = Json::array();
      for (const auto& p : h.matching_ports) ports.push_back(p);
      hits.push_back(Json{{"id", h.ref.id},
                          {"version", h.ref.version},
                          {"doc", h.doc},
                          {"score", h.score},
                          {"matching_ports", ports}});
    }
    reply(res, 200, hits);
  }));

  server.Get("/components/:id/:ver",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               ComponentRef ref{req.path_params.at("id"), req.path_params.at("ver")};
               auto d = catalog.find(ref);
               if (!d) throw RegistryError(RegistryErrorKind::NotFound, "unknown " + ref.str());
               if (req.get_param_value("format") == "json") {
                 reply(res, 200, descriptor_to_json(*d));
               } else {
                 res.set_content(serialize_descriptor(*d), kXml);
               }
             }));

  server.Post("/projects", guarded([&](const httplib::Request& req, httplib::Response& res) {
    Project initial;
    if (!req.body.empty()) initial = parse_project(req.body);
    std::string pid = sessions.create(std::move(initial));
    reply(res, 201, Json{{"id", pid}});
  }));

  server.Get("/projects/:pid", guarded([&](const httplib::Request& req, httplib::Response& res) {
    auto s = sessions.snapshot(req.path_params.at("pid"));
    res.set_content(serialize_project(s.project), kXml);
  }));

  server.Put("/projects/:pid", guarded([&](const httplib::Request& req, httplib::Response& res) {
    Project next = parse_project(req.body);
    Project stored = sessions.apply(req.path_params.at("pid"), [&](const Project&) { return next; });
    res.set_content(serialize_project(stored), kXml);
  }));

  server.Post("/projects/:pid/instances",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                Json body = parse_body(req);
                ComponentRef ref{field(body, "component"), field(body, "version")};
                std::string id = field(body, "id");
                Project p = sessions.apply(req.path_params.at("pid"), [&](const Project& cur) {
                  return add_instance(cur, catalog, ref, id);
                });
                reply(res, 201, Json{{"instance", id}, {"root", p.root}});
              }));

  server.Get("/projects/:pid/instances/:iid",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               auto s = sessions.snapshot(req.path_params.at("pid"));
               const std::string& iid = req.path_params.at("iid");
               const InstanceNode* node = s.project.find_instance(iid);
               if (!node) {
                 throw GraphError(GraphErrorKind::UnknownInstance, "unknown instance '" + iid + "'");
               }
               auto d = descriptor_of(s.project, catalog, *node);
               if (!d) {
                 throw GraphError(GraphErrorKind::UnknownComponent,
                                  "unknown component " + node->component.str());
               }
               Json checks = Json::array();
               for (const auto& [port, state] : checkbox_states(s.project, catalog, iid)) {
                 const char* text = state == CheckboxState::Default    ? "default"
                                    : state == CheckboxState::External ? "external"
                                                                       : "inactive";
                 const Binding* b = s.project.binding_for(iid, port);
                 checks.push_back(Json{{"port", port},
                                       {"state", text},
                                       {"bound_to", b ? Json(b->child) : Json(nullptr)}});
               }
               reply(res, 200,
                     Json{{"instance", iid},
                          {"synthesized", node->synthesized},
                          {"component", descriptor_to_json(*d)},
                          {"checkboxes", checks}});
             }));

  server.Post("/projects/:pid/bindings",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                Json body = parse_body(req);
                Binding b{field(body, "parent"), field(body, "uses"), field(body, "child"),
                          field(body, "provide"), false};
                CompatPolicy policy = body_policy(body);
                std::optional<CompatReport> report;
                sessions.apply(req.path_params.at("pid"), [&](const Project& cur) {
                  Project next = bind(cur, catalog, b, policy);
                  auto pd = catalog.find(cur.find_instance(b.parent)->component);
                  auto cd = catalog.find(cur.find_instance(b.child)->component);
                  report = check_binding(pd->find_uses(b.uses)->signature,
                                         cd->find_provide(b.provide)->signature, policy);
                  return next;
                });
                Json out{{"bound", true}, {"report", report_to_json(*report)}};
                reply(res, 201, out);
              }));

  server.Delete("/projects/:pid/bindings",
                guarded([&](const httplib::Request& req, httplib::Response& res) {
                  std::string parent = req.get_param_value("parent");
                  std::string uses = req.get_param_value("uses");
                  sessions.apply(req.path_params.at("pid"), [&](const Project& cur) {
                    return unbind(cur, parent, uses);
                  });
                  reply(res, 200, Json{{"unbound", true}});
                }));

  server.Post("/projects/:pid/pipes",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                Json body = parse_body(req);
                PipeEdge e{field(body, "from"), field(body, "from_port"), field(body, "from_param"),
                           field(body, "to"),   field(body, "to_port"),   field(body, "to_param")};
                CompatPolicy policy = body_policy(body);
                sessions.apply(req.path_params.at("pid"), [&](const Project& cur) {
                  return pipe(cur, catalog, e, policy);
                });
                reply(res, 201, Json{{"piped", true}});
              }));

  server.Post("/projects/:pid/checkbox",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                Json body = parse_body(req);
                std::string instance = field(body, "instance");
                std::string port = field(body, "port");
                auto it = body.find("external");
                if (it == body.end() || !it->is_boolean()) {
                  throw BadRequest("field 'external' must be a boolean");
                }
                bool external = it->get<bool>();
                sessions.apply(req.path_params.at("pid"), [&](const Project& cur) {
                  return set_checkbox(cur, catalog, instance, port, external);
                });
                reply(res, 200, Json{{"instance", instance}, {"port", port}, {"external", external}});
              }));

  server.Post("/projects/:pid/layout",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                Json body = parse_body(req);
                std::string instance = field(body, "instance");
                if (!body.contains("x") || !body["x"].is_number() || !body.contains("y") ||
                    !body["y"].is_number()) {
                  throw BadRequest("fields 'x' and 'y' must be numbers");
                }
                LayoutHint hint{body["x"].get<double>(), body["y"].get<double>()};
                sessions.apply(req.path_params.at("pid"), [&](const Project& cur) {
                  return set_layout(cur, instance, hint);
                });
                reply(res, 200, Json{{"instance", instance}});
              }));

  server.Get("/projects/:pid/validate",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               auto s = sessions.snapshot(req.path_params.at("pid"));
               auto ds = validate_project(s.project, catalog);
               reply(res, 200, Json{{"valid", ds.empty()}, {"diagnostics", diagnostics_to_json(ds)}});
             }));

  server.Get("/projects/:pid/order",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               auto s = sessions.snapshot(req.path_params.at("pid"));
               auto ds = validate_project(s.project, catalog);
               if (!ds.empty()) {
                 Json body = error_body("invalid-project", "project is not valid");
                 body["diagnostics"] = diagnostics_to_json(ds);
                 reply(res, 422, body);
                 return;
               }
               Json order = Json::array();
               for (const auto& id : execution_order(s.project, catalog)) order.push_back(id);
               reply(res, 200, order);
             }));

  server.Post("/projects/:pid/normalize",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                const std::string& pid = req.path_params.at("pid");
                Project normalized;
                if (query_flag(req, "preview", false)) {
                  normalized = normalize_connectors(sessions.snapshot(pid).project, catalog);
                } else {
                  normalized = sessions.apply(pid, [&](const Project& cur) {
                    return normalize_connectors(cur, catalog);
                  });
                }
                res.set_content(serialize_project(normalized), kXml);
              }));

  server.Post("/projects/:pid/run", guarded([&](const httplib::Request& req,
                                                 httplib::Response& res) {
    auto s = sessions.snapshot(req.path_params.at("pid"));
    Json body = req.body.empty() ? Json::object() : parse_body(req);
    std::string entry = field(body, "entry");
    std::vector<Value> args;
    if (auto it = body.find("args"); it != body.end()) {
      if (!it->is_array()) throw BadRequest("field 'args' must be an array");
      for (const auto& a : *it) args.push_back(value_from_json(a));
    }
    RunOptions run = options.run;
    if (flag(body, "direct", false)) run.pipe_mode = PipeMode::Direct;
    auto ds = validate_project(s.project, catalog);
    if (!ds.empty()) {
      Json err = error_body("invalid-project", "project is not valid");
      err["diagnostics"] = diagnostics_to_json(ds);
      reply(res, 422, err);
      return;
    }
    auto project = std::make_shared<Project>(std::move(s.project));
    res.set_chunked_content_provider(
        "application/x-ndjson",
        [project, entry, args, run, &catalog](std::size_t, httplib::DataSink& sink) {
          auto write = [&sink](const std::string& line) {
            std::string data = line + "\n";
            sink.write(data.data(), data.size());
          };
          std::ostringstream printed;
          RunOptions opts = run;
          opts.sink = &printed;
          opts.on_event = [&](const TraceEvent& e) { write(encode_event(e)); };
          Json last;
          try {
            RunResult r = run_project(*project, catalog, catalog, entry, args, opts);
            last = Json{{"result", value_to_json(r.value)}};
          } catch (const RunError& e) {
            last = error_body(to_string(e.kind()), e.what());
          } catch (const std::exception& e) {
            last = error_body("internal", e.what());
          }
          if (!printed.str().empty()) last["output"] = printed.str();
          write(dump_json(last));
          sink.done();
          return true;
        });
  }));

  server.Post("/projects/:pid/undo",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                Project p = sessions.undo(req.path_params.at("pid"));
                res.set_content(serialize_project(p), kXml);
              }));

  server.Get("/compat/check", guarded([&](const httplib::Request& req, httplib::Response& res) {
    PortSignature required = query_signature(req, "required");
    PortSignature offered = query_signature(req, "offered");
    CompatPolicy policy{query_flag(req, "widening", true), query_flag(req, "names", false)};
    reply(res, 200, report_to_json(check_binding(required, offered, policy)));
  }));

  server.Get("/skins/:ref", guarded([&](const httplib::Request& req, httplib::Response& res) {
    SkinSpec skin = resolve_skin(catalog, req.path_params.at("ref"));
    Json hints = Json::object();
    for (const auto& [port, hint] : skin.port_hints) hints[port] = hint;
    reply(res, 200,
          Json{{"ref", skin.ref},
               {"size", skin.base_size},
               {"color", skin.color},
               {"icon", skin.icon},
               {"port_hints", hints}});
  }));
}

bool serve(const PackageSource& packages, const std::string& host, int port,
           ServiceOptions options) {
  Service service(packages, std::move(options));
  httplib::Server server;
  service.mount(server);
  return server.listen(host, port);
}

}  // namespace modweave
