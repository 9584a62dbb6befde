#include "modweave/frontage/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "modweave/core/kbody.hpp"
#include "modweave/core/signature_text.hpp"
#include "modweave/frontage/service.hpp"
#include "modweave/io/descriptor_io.hpp"
#include "modweave/io/project_io.hpp"
#include "modweave/io/xml.hpp"
#include "modweave/registry/stdlib.hpp"
#include "modweave/runtime/protocol.hpp"

namespace modweave {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string store;
  std::string file;
  std::string output;
  std::string entry;
  std::vector<std::string> args;
  std::string trace;
  bool direct = false;
  int timeout_ms = 30000;
  std::string query;
  std::string sig;
  std::string dir;
  std::string id;
  std::string version;
  std::string host = "127.0.0.1";
  int port = 8080;
  int n = 0;
  int k = 0;
  std::string demo;
};

std::string read_input(const std::string& file, std::istream& in) {
  if (file == "-") {
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  std::ifstream f(file, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + file + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_output(const std::string& file, const std::string& text, std::ostream& out) {
  if (file.empty() || file == "-") {
    out << text;
    return;
  }
  std::ofstream f(file, std::ios::binary);
  f << text;
  if (!f) throw UsageError("cannot write '" + file + "'");
}

// Package sources seen by one command: the store (if any) ahead of the
// built-in library.
class Sources {
 public:
  explicit Sources(const std::string& store_path) {
    if (!store_path.empty()) {
      store_ = std::make_unique<ComponentStore>(store_path);
      chain_ = std::make_unique<ChainedSource>(
          std::vector<const PackageSource*>{store_.get(), &std_library()});
    } else {
      chain_ = std::make_unique<ChainedSource>(
          std::vector<const PackageSource*>{&std_library()});
    }
  }
  const PackageSource& packages() const { return *chain_; }
  ComponentStore& store() const {
    if (!store_) throw UsageError("no store: pass --store or set MODWEAVE_STORE");
    return *store_;
  }

 private:
  std::unique_ptr<ComponentStore> store_;
  std::unique_ptr<ChainedSource> chain_;
};

// A project file, or a component file wrapped as a one-instance project
// rooted at "main".
struct LoadedProject {
  Project project;
  DescriptorSet local;
  std::optional<ComponentDescriptor> component;
};

LoadedProject load(const std::string& text) {
  LoadedProject out;
  Element root = xml::parse(text);
  if (root.name == "component") {
    ComponentDescriptor d = parse_descriptor(text);
    out.local.add(d);
    out.project.root = "main";
    out.project.instances.push_back(InstanceNode{"main", d.ref(), {}, false});
    out.component = std::move(d);
  } else {
    out.project = parse_project(text);
  }
  return out;
}

int print_diagnostics(const std::vector<Diagnostic>& ds, std::ostream& out) {
  for (const auto& d : ds) out << format_diagnostic(d) << '\n';
  return has_errors(ds) ? kExitValidation : kExitOk;
}

int cmd_validate(const Options& o, const Sources& src, std::ostream& out, std::istream& in) {
  LoadedProject lp = load(read_input(o.file, in));
  if (lp.component) {
    auto ds = validate_descriptor(*lp.component);
    if (!ds.empty()) return print_diagnostics(ds, out);
    std::size_t mandatory = std::count_if(lp.component->uses_ports.begin(),
                                          lp.component->uses_ports.end(),
                                          [](const UsesPortSpec& u) { return u.mandatory; });
    out << "valid component " << lp.component->ref().str() << ": "
        << lp.component->provide_ports.size() << " provide port(s), "
        << lp.component->uses_ports.size() << " uses port(s), " << mandatory
        << " needing wiring\n";
    return kExitOk;
  }
  ChainedCatalog catalog({&lp.local, &src.packages()});
  auto ds = validate_project(lp.project, catalog);
  if (!ds.empty()) return print_diagnostics(ds, out);
  out << "valid project: " << lp.project.instances.size() << " instance(s)\n";
  return kExitOk;
}

int cmd_order(const Options& o, const Sources& src, std::ostream& out, std::istream& in) {
  LoadedProject lp = load(read_input(o.file, in));
  ChainedCatalog catalog({&lp.local, &src.packages()});
  auto ds = validate_project(lp.project, catalog);
  if (!ds.empty()) return print_diagnostics(ds, out);
  for (const auto& id : execution_order(lp.project, catalog)) out << id << '\n';
  return kExitOk;
}

int cmd_normalize(const Options& o, const Sources& src, std::ostream& out, std::istream& in) {
  LoadedProject lp = load(read_input(o.file, in));
  ChainedCatalog catalog({&lp.local, &src.packages()});
  auto ds = validate_project(lp.project, catalog);
  if (!ds.empty()) return print_diagnostics(ds, out);
  write_output(o.output, serialize_project(normalize_connectors(lp.project, catalog)), out);
  return kExitOk;
}

int cmd_run(const Options& o, const Sources& src, std::ostream& out, std::ostream& err,
            std::istream& in) {
  LoadedProject lp = load(read_input(o.file, in));
  ChainedCatalog catalog({&lp.local, &src.packages()});
  auto ds = validate_project(lp.project, catalog);
  if (!ds.empty()) return print_diagnostics(ds, out);
  std::vector<Value> args;
  for (const auto& a : o.args) {
    try {
      args.push_back(decode_value(a));
    } catch (const ProtocolError& e) {
      throw UsageError("bad --arg '" + a + "': " + e.what());
    }
  }
  RunOptions options;
  options.pipe_mode = o.direct ? PipeMode::Direct : PipeMode::Lowered;
  options.run_timeout = std::chrono::milliseconds(o.timeout_ms);
  options.sink = &err;
  auto emit_trace = [&](const RunTrace& t) {
    if (!o.trace.empty()) write_output(o.trace, write_trace(t), out);
  };
  try {
    RunResult r = run_project(lp.project, catalog, src.packages(), o.entry, args, options);
    emit_trace(r.trace);
    out << encode_value(r.value) << '\n';
    return kExitOk;
  } catch (const RunError& e) {
    emit_trace(e.trace());
    err << "run failed (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_registry_list(const Sources& src, std::ostream& out) {
  for (const auto& r : src.packages().list()) out << r.id << ' ' << r.version << '\n';
  return kExitOk;
}

int cmd_registry_search(const Options& o, const Sources& src, std::ostream& out) {
  std::optional<PortSignature> filter;
  if (!o.sig.empty()) filter = parse_signature(o.sig);
  for (const auto& h : search(src.packages(), o.query, filter)) {
    out << h.ref.id << ' ' << h.ref.version;
    for (const auto& p : h.matching_ports) out << ' ' << p;
    out << '\n';
  }
  return kExitOk;
}

int cmd_registry_install(const Options& o, const Sources& src, std::ostream& out,
                         std::ostream& err, std::istream& in) {
  namespace fs = std::filesystem;
  fs::path dir(o.dir);
  ComponentPackage pkg;
  pkg.descriptor = parse_descriptor(read_input((dir / "descriptor.component.xml").string(), in));
  pkg.behavior = parse_manifest(read_input((dir / "manifest.xml").string(), in));
  if (fs::exists(dir / "skin.xml")) {
    pkg.skin = parse_skin(read_input((dir / "skin.xml").string(), in));
  }
  try {
    ComponentRef r = src.store().install(pkg);
    out << "installed " << r.str() << '\n';
    return kExitOk;
  } catch (const RegistryError& e) {
    err << e.what() << '\n';
    return e.kind() == RegistryErrorKind::Invalid ? kExitValidation : kExitRuntime;
  }
}

int cmd_registry_get(const Options& o, const Sources& src, std::ostream& out,
                     std::ostream& err) {
  auto d = src.packages().find(ComponentRef{o.id, o.version});
  if (!d) {
    err << "unknown component " << o.id << '@' << o.version << '\n';
    return kExitValidation;
  }
  out << serialize_descriptor(*d);
  return kExitOk;
}

int cmd_demo_project(const Options& o, const Sources& src, std::ostream& out) {
  Project p;
  if (o.demo == "fig") {
    p = make_fig_project(src.packages());
  } else if (o.demo == "sum") {
    p = make_sum_demo_project(src.packages());
  } else {
    throw UsageError("unknown demo project '" + o.demo + "' (fig or sum)");
  }
  write_output(o.output, serialize_project(p), out);
  return kExitOk;
}

int cmd_serve(const Options& o, const Sources& src, std::ostream& out, std::ostream& err) {
  out << "serving on http://" << o.host << ':' << o.port << '\n' << std::flush;
  if (!serve(src.packages(), o.host, o.port)) {
    err << "cannot listen on " << o.host << ':' << o.port << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            std::istream& in) {
  Options o;
  CLI::App app{"Wire, check and run component projects.", "modweave"};
  app.require_subcommand(1);
  app.fallthrough();  // --store may follow the subcommand
  app.add_option("--store", o.store, "component store directory")->envname("MODWEAVE_STORE");

  auto* validate = app.add_subcommand("validate", "check a project or component file");
  validate->add_option("file", o.file, "file, or - for stdin")->required();
  auto* order = app.add_subcommand("order", "print the execution order");
  order->add_option("file", o.file)->required();
  auto* normalize = app.add_subcommand("normalize", "lower pipes onto connectors");
  normalize->add_option("file", o.file)->required();
  normalize->add_option("-o,--output", o.output);
  auto* run = app.add_subcommand("run", "execute a project");
  run->add_option("file", o.file)->required();
  run->add_option("--entry", o.entry, "provide port of the root")->required();
  run->add_option("--arg", o.args, "typed value, e.g. {\"t\":\"real\",\"v\":1.5}");
  run->add_option("--trace", o.trace, "write the trace here (- for stdout)");
  run->add_flag("--direct", o.direct, "buffer pipes in the engine instead of connectors");
  run->add_option("--timeout-ms", o.timeout_ms)->check(CLI::PositiveNumber);

  auto* registry = app.add_subcommand("registry", "component store");
  registry->require_subcommand(1);
  auto* reg_list = registry->add_subcommand("list");
  auto* reg_search = registry->add_subcommand("search");
  reg_search->add_option("query", o.query);
  reg_search->add_option("--sig", o.sig, "required signature, e.g. 'f(in x:real) -> real'");
  auto* reg_install = registry->add_subcommand("install", "install a package directory");
  reg_install->add_option("dir", o.dir)->required();
  auto* reg_get = registry->add_subcommand("get", "print a descriptor");
  reg_get->add_option("id", o.id)->required();
  reg_get->add_option("version", o.version)->required();

  auto* serve_cmd = app.add_subcommand("serve", "start the HTTP service");
  serve_cmd->add_option("--port", o.port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", o.host);

  auto* demo = app.add_subcommand("demo", "built-in examples");
  demo->require_subcommand(1);
  auto* kbody = demo->add_subcommand("kbody", "emit a k-body interaction component");
  kbody->add_option("--n", o.n)->required()->check(CLI::Range(1, 12));
  kbody->add_option("--k", o.k)->required()->check(CLI::Range(1, 12));
  auto* demo_project = demo->add_subcommand("project", "emit a demo project (fig or sum)");
  demo_project->add_option("name", o.demo)->required();
  demo_project->add_option("-o,--output", o.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Sources src(o.store);
    if (*validate) return cmd_validate(o, src, out, in);
    if (*order) return cmd_order(o, src, out, in);
    if (*normalize) return cmd_normalize(o, src, out, in);
    if (*run) return cmd_run(o, src, out, err, in);
    if (*reg_list) return cmd_registry_list(src, out);
    if (*reg_search) return cmd_registry_search(o, src, out);
    if (*reg_install) return cmd_registry_install(o, src, out, err, in);
    if (*reg_get) return cmd_registry_get(o, src, out, err);
    if (*serve_cmd) return cmd_serve(o, src, out, err);
    if (*kbody) {
      if (o.k > o.n) throw UsageError("--k must not exceed --n");
      out << serialize_descriptor(make_kbody_component(o.n, o.k));
      return kExitOk;
    }
    if (*demo_project) return cmd_demo_project(o, src, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << e.what() << '\n';
    return kExitValidation;
  } catch (const GraphError& e) {
    err << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace modweave
