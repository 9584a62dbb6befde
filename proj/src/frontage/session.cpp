#include "modweave/frontage/session.hpp"

namespace modweave {

std::string SessionManager::create(Project initial) {
  std::unique_lock lock(map_mutex_);
  std::string pid = "p" + std::to_string(next_id_++);
  auto e = std::make_unique<Entry>();
  e->session.id = pid;
  e->session.project = std::move(initial);
  entries_.emplace(pid, std::move(e));
  return pid;
}

bool SessionManager::contains(const std::string& pid) const {
  std::shared_lock lock(map_mutex_);
  return entries_.count(pid) != 0;
}

SessionManager::Entry& SessionManager::entry(const std::string& pid) const {
  std::shared_lock lock(map_mutex_);
  auto it = entries_.find(pid);
  if (it == entries_.end()) {
    throw SessionError(SessionErrorKind::NotFound, "unknown project '" + pid + "'");
  }
  return *it->second;
}

ProjectSession SessionManager::snapshot(const std::string& pid) const {
  Entry& e = entry(pid);
  std::lock_guard lock(e.mutex);
  return e.session;
}

Project SessionManager::apply(const std::string& pid,
                              const std::function<Project(const Project&)>& edit) {
  Entry& e = entry(pid);
  std::lock_guard lock(e.mutex);
  Project next = edit(e.session.project);
  auto& undo = e.session.undo;
  undo.push_back(std::move(e.session.project));
  if (undo.size() > max_undo_) undo.erase(undo.begin());
  e.session.project = std::move(next);
  e.session.dirty = true;
  return e.session.project;
}

Project SessionManager::undo(const std::string& pid) {
  Entry& e = entry(pid);
  std::lock_guard lock(e.mutex);
  auto& undo = e.session.undo;
  if (undo.empty()) {
    throw SessionError(SessionErrorKind::NothingToUndo, "nothing to undo in '" + pid + "'");
  }
  e.session.project = std::move(undo.back());
  undo.pop_back();
  e.session.dirty = true;
  return e.session.project;
}

}  // namespace modweave
