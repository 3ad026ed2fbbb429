#pragma once

#include <stdexcept>
#include <string>

namespace asmkit {

// Base class for all errors raised by the library. `context` carries the
// document path or entity id the error refers to, when one exists.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message, std::string context = {})
      : std::runtime_error(context.empty() ? message
                                           : context + ": " + message),
        context_(std::move(context)) {}

  const std::string& context() const { return context_; }

 private:
  std::string context_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ReferenceError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace asmkit
