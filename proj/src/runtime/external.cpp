#include "modweave/runtime/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <thread>

#include "modweave/runtime/protocol.hpp"
#include "modweave/runtime/run_error.hpp"

namespace modweave {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxLine = 16u << 20;
constexpr int kLaunchFailed = 127;

// Owns the child and our end of the socket.
class ChildProcess {
 public:
  ChildProcess(const ExternalProvider& provider) {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
      throw RunError(RunErrorKind::ProviderLaunch,
                     std::string("socketpair failed: ") + std::strerror(errno));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      ::close(sv[0]);
      ::close(sv[1]);
      throw RunError(RunErrorKind::ProviderLaunch,
                     std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
      // Own process group, so a kill also reaches whatever the shell spawned.
      ::setpgid(0, 0);
      ::dup2(sv[1], STDIN_FILENO);
      ::dup2(sv[1], STDOUT_FILENO);
      if (!provider.working_directory.empty() &&
          ::chdir(provider.working_directory.c_str()) != 0) {
        ::_exit(kLaunchFailed);
      }
      ::execl("/bin/sh", "sh", "-c", provider.command.c_str(), static_cast<char*>(nullptr));
      ::_exit(kLaunchFailed);
    }
    ::setpgid(pid_, pid_);  // also here, in case the child has not run yet
    ::close(sv[1]);
    fd_ = sv[0];
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() {
    if (fd_ >= 0) ::close(fd_);
    if (pid_ > 0 && !reaped_) {
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
  }

  void send_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
      ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw RunError(RunErrorKind::Protocol, "child closed its input before the session ended");
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  // Returns false on end of stream.
  bool read_line(std::string& line, Clock::time_point until, bool& timed_out) {
    timed_out = false;
    for (;;) {
      auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return true;
      }
      if (buffer_.size() > kMaxLine) {
        throw RunError(RunErrorKind::Protocol, "message line exceeds size limit");
      }
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(until - Clock::now());
      if (left.count() <= 0) {
        timed_out = true;
        return false;
      }
      pollfd pfd{fd_, POLLIN, 0};
      int r = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw RunError(RunErrorKind::Protocol, std::string("poll failed: ") + std::strerror(errno));
      }
      if (r == 0) continue;
      char chunk[4096];
      ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        return false;
      }
      if (n == 0) return false;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  // Waits up to `grace` for a voluntary exit, then kills.
  int finish(std::chrono::milliseconds grace) {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
    auto until = Clock::now() + grace;
    int status = 0;
    for (;;) {
      pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_) break;
      if (r < 0 && errno != EINTR) return -1;
      if (Clock::now() >= until) {
        ::kill(-pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    reaped_ = true;
    return status;
  }

 private:
  pid_t pid_ = -1;
  int fd_ = -1;
  bool reaped_ = false;
  std::string buffer_;
};

}  // namespace

SessionResult run_external_session(const ExternalProvider& provider, const std::string& port,
                                   const std::vector<Value>& args, InvocationContext& ctx,
                                   const SessionLimits& limits) {
  ChildProcess child(provider);
  child.send_line(protocol::encode(protocol::Invoke{port, args}));
  bool heard = false;
  for (;;) {
    auto until = std::min(limits.deadline, Clock::now() + limits.message_timeout);
    std::string line;
    bool timed_out = false;
    if (!child.read_line(line, until, timed_out)) {
      if (timed_out) {
        throw RunError(RunErrorKind::Timeout,
                       "no message from '" + provider.command + "' within the time limit");
      }
      int status = child.finish(std::chrono::milliseconds(200));
      if (!heard && WIFEXITED(status) && WEXITSTATUS(status) == kLaunchFailed) {
        throw RunError(RunErrorKind::ProviderLaunch,
                       "could not launch '" + provider.command + "'");
      }
      throw RunError(RunErrorKind::Protocol,
                     "child '" + provider.command + "' exited before returning");
    }
    heard = true;
    protocol::Message message;
    try {
      message = protocol::decode(line);
    } catch (const ProtocolError& e) {
      throw RunError(RunErrorKind::Protocol, std::string("malformed message: ") + e.what());
    }
    if (auto* call = std::get_if<protocol::Call>(&message)) {
      Value result = ctx.call(call->port, call->args);
      child.send_line(protocol::encode(protocol::Result{result}));
    } else if (auto* ret = std::get_if<protocol::Return>(&message)) {
      child.finish(std::chrono::milliseconds(500));
      return SessionResult{ret->value, ret->outs};
    } else if (auto* err = std::get_if<protocol::Error>(&message)) {
      throw RunError(RunErrorKind::Behavior, "component reported: " + err->message);
    } else {
      throw RunError(RunErrorKind::Protocol, "unexpected message from child: " + line);
    }
  }
}

}  // namespace modweave
