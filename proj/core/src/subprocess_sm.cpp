#include "asmkit/subprocess_sm.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>

#include "asmkit/errors.hpp"

namespace asmkit {

std::string run_subprocess(const std::string& command,
                           const std::string& input) {
  int in_pipe[2];   // parent -> child stdin
  int out_pipe[2];  // child stdout -> parent
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw Error("pipe() failed: " + std::string(std::strerror(errno)));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    throw Error("fork() failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);

  std::size_t written = 0;
  while (written < input.size()) {
    const ssize_t n = write(in_pipe[1], input.data() + written,
                            input.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;  // child may have exited early; its status tells the story
    }
    written += static_cast<std::size_t>(n);
  }
  close(in_pipe[1]);

  std::string output;
  std::array<char, 4096> buffer{};
  for (;;) {
    const ssize_t n = read(out_pipe[0], buffer.data(), buffer.size());
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buffer.data(), static_cast<std::size_t>(n));
  }
  close(out_pipe[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error("simulation command failed (exit status " +
                    std::to_string(WIFEXITED(status) ? WEXITSTATUS(status)
                                                     : -1) +
                    ")",
                command);
  }
  return output;
}

SubprocessSm::SubprocessSm(std::string command,
                           std::vector<std::string> handlers)
    : command_(std::move(command)), handlers_(std::move(handlers)) {}

bool SubprocessSm::supports_handler(const std::string& handler) const {
  return handlers_.empty() ||
         std::find(handlers_.begin(), handlers_.end(), handler) !=
             handlers_.end();
}

KpiResult SubprocessSm::evaluate(const Scenario& scenario) const {
  const std::string output =
      run_subprocess(command_, scenario_to_json(scenario).dump());
  try {
    return kpi_from_json(nlohmann::json::parse(output));
  } catch (const nlohmann::json::exception& err) {
    throw Error("simulation command returned invalid KPI JSON: " +
                    std::string(err.what()),
                command_);
  }
}

}  // namespace asmkit
