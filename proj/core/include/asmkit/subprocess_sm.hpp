#pragma once

#include <string>
#include <vector>

#include "asmkit/scenario.hpp"

namespace asmkit {

// Plug-in contract for external simulators: the scenario is written to the
// child's standard input as one JSON document, the KPI result is read back
// from its standard output, and a nonzero exit status is an evaluation
// error. Handler support is declared up front so mismatches fail before a
// search starts.
class SubprocessSm : public Sm {
 public:
  SubprocessSm(std::string command, std::vector<std::string> handlers);

  KpiResult evaluate(const Scenario& scenario) const override;
  bool supports_handler(const std::string& handler) const override;
  std::string id() const override { return "cmd:" + command_; }

 private:
  std::string command_;
  std::vector<std::string> handlers_;
};

// Runs `command` through the shell, feeding `input` on stdin. Returns the
// captured stdout; throws Error on spawn failure or nonzero exit.
std::string run_subprocess(const std::string& command,
                           const std::string& input);

}  // namespace asmkit
