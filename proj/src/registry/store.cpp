#include "modweave/registry/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "modweave/io/descriptor_io.hpp"

namespace modweave {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDescriptorFile = "descriptor.component.xml";
constexpr const char* kManifestFile = "manifest.xml";
constexpr const char* kSkinFile = "skin.xml";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RegistryError(RegistryErrorKind::Io, "cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw RegistryError(RegistryErrorKind::Io, "cannot write " + path.string());
}

class StoreLock {
 public:
  explicit StoreLock(const fs::path& file) {
    fd_ = ::open(file.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
      if (fd_ >= 0) ::close(fd_);
      throw RegistryError(RegistryErrorKind::Io, "cannot lock " + file.string());
    }
  }
  ~StoreLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;

 private:
  int fd_ = -1;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return lower(haystack).find(needle) != std::string::npos;
}

}  // namespace

std::optional<ComponentDescriptor> PackageSource::find(const ComponentRef& ref) const {
  auto pkg = get(ref);
  if (!pkg) return std::nullopt;
  return std::move(pkg->descriptor);
}

std::optional<BehaviorProvider> PackageSource::provider_for(const ComponentRef& ref) const {
  auto pkg = get(ref);
  if (!pkg) return std::nullopt;
  return std::move(pkg->behavior);
}

ComponentStore::ComponentStore(fs::path root) : root_(std::move(root)) {}

ComponentRef ComponentStore::install(const ComponentPackage& pkg) {
  auto problems = validate_package(pkg);
  if (!problems.empty()) {
    std::string message = "package " + pkg.descriptor.ref().str() + " is invalid";
    for (const auto& d : problems) message += "\n  " + format_diagnostic(d);
    throw RegistryError(RegistryErrorKind::Invalid, message);
  }
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw RegistryError(RegistryErrorKind::Io, "cannot create " + root_.string());
  StoreLock lock(root_ / ".lock");

  const ComponentDescriptor& d = pkg.descriptor;
  fs::path target = root_ / d.id / d.version;
  if (fs::exists(target)) {
    throw RegistryError(RegistryErrorKind::Duplicate, d.ref().str() + " is already installed");
  }
  fs::create_directories(target.parent_path(), ec);
  fs::path staging = target.parent_path() / ("." + d.version + ".tmp");
  fs::remove_all(staging, ec);
  fs::create_directories(staging, ec);
  if (ec) throw RegistryError(RegistryErrorKind::Io, "cannot create " + staging.string());
  try {
    write_file(staging / kDescriptorFile, serialize_descriptor(d));
    write_file(staging / kManifestFile, serialize_manifest(pkg.behavior));
    if (pkg.skin) write_file(staging / kSkinFile, serialize_skin(*pkg.skin));
    fs::rename(staging, target);
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  return d.ref();
}

std::vector<ComponentRef> ComponentStore::list() const {
  std::vector<ComponentRef> out;
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) return out;
  for (const auto& id_dir : fs::directory_iterator(root_, ec)) {
    if (!id_dir.is_directory()) continue;
    std::string id = id_dir.path().filename().string();
    if (!is_component_id(id)) continue;
    for (const auto& v_dir : fs::directory_iterator(id_dir.path(), ec)) {
      std::string version = v_dir.path().filename().string();
      if (v_dir.is_directory() && is_version(version) &&
          fs::exists(v_dir.path() / kDescriptorFile)) {
        out.push_back(ComponentRef{id, version});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<ComponentPackage> ComponentStore::get(const ComponentRef& ref) const {
  if (!is_component_id(ref.id) || !is_version(ref.version)) return std::nullopt;
  fs::path dir = root_ / ref.id / ref.version;
  std::error_code ec;
  if (!fs::exists(dir / kDescriptorFile, ec)) return std::nullopt;
  ComponentPackage pkg;
  pkg.descriptor = parse_descriptor(read_file(dir / kDescriptorFile));
  pkg.behavior = parse_manifest(read_file(dir / kManifestFile));
  if (fs::exists(dir / kSkinFile, ec)) pkg.skin = parse_skin(read_file(dir / kSkinFile));
  return pkg;
}

std::vector<ComponentRef> ChainedSource::list() const {
  std::set<ComponentRef> all;
  for (const auto* s : chain_) {
    for (auto& r : s->list()) all.insert(std::move(r));
  }
  return {all.begin(), all.end()};
}

std::optional<ComponentPackage> ChainedSource::get(const ComponentRef& ref) const {
  for (const auto* s : chain_) {
    if (auto pkg = s->get(ref)) return pkg;
  }
  return std::nullopt;
}

std::vector<SearchHit> search(const PackageSource& source, const std::string& query,
                              const std::optional<PortSignature>& filter,
                              const CompatPolicy& policy) {
  std::string q = lower(query);
  std::vector<SearchHit> hits;
  for (const auto& ref : source.list()) {
    auto pkg = source.get(ref);
    if (!pkg) continue;
    const ComponentDescriptor& d = pkg->descriptor;
    SearchHit hit{ref, d.doc, 0, {}};
    if (!q.empty()) {
      std::string short_name = d.id.substr(d.id.rfind('.') + 1);
      if (contains(short_name, q)) hit.score += 4;
      if (contains(d.id, q)) hit.score += 2;
      for (const auto& p : d.provide_ports) {
        if (contains(p.name(), q)) {
          hit.score += 2;
          break;
        }
      }
      if (contains(d.doc, q)) hit.score += 1;
      if (hit.score == 0) continue;
    }
    if (filter) {
      for (const auto& p : d.provide_ports) {
        if (check_binding(*filter, p.signature, policy).compatible) {
          hit.matching_ports.push_back(p.name());
        }
      }
      if (hit.matching_ports.empty()) continue;
    }
    hits.push_back(std::move(hit));
  }
  std::stable_sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ref < b.ref;
  });
  return hits;
}

SkinSpec resolve_skin(const PackageSource& source, const std::string& ref) {
  for (const auto& r : source.list()) {
    auto pkg = source.get(r);
    if (pkg && pkg->skin && pkg->skin->ref == ref) return *pkg->skin;
  }
  return default_skin();
}

}  // namespace modweave
