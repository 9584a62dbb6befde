#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "modweave/core/error.hpp"
#include "modweave/graph/project.hpp"

namespace modweave {

enum class SessionErrorKind { NotFound, NothingToUndo };

class SessionError : public Error {
 public:
  SessionError(SessionErrorKind kind, const std::string& message)
      : Error(message), kind_(kind) {}
  SessionErrorKind kind() const { return kind_; }

 private:
  SessionErrorKind kind_;
};

struct ProjectSession {
  std::string id;
  Project project;
  std::vector<Project> undo;  // oldest first
  bool dirty = false;
};

// In-memory projects keyed by id. Edits to one project are serialized; a
// failing edit leaves the stored value untouched.
class SessionManager {
 public:
  explicit SessionManager(std::size_t max_undo = 100) : max_undo_(max_undo) {}

  std::string create(Project initial = {});
  bool contains(const std::string& pid) const;
  ProjectSession snapshot(const std::string& pid) const;

  // Stores edit(current) and pushes the previous value on the undo stack.
  // Exceptions from `edit` propagate and nothing changes.
  Project apply(const std::string& pid, const std::function<Project(const Project&)>& edit);
  Project undo(const std::string& pid);

 private:
  struct Entry {
    mutable std::mutex mutex;
    ProjectSession session;
  };
  Entry& entry(const std::string& pid) const;

  std::size_t max_undo_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::unique_ptr<Entry>> entries_;
  std::size_t next_id_ = 1;
};

}  // namespace modweave
