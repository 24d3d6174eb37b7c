#pragma once

#include <stdexcept>
#include <string>

namespace vidtone {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  bounds = 3,     // region or box outside the frame
  input = 4,      // malformed numeric input (unnormalized histogram, bad lambda)
  invariant = 5,  // a type invariant was violated (non-monotone curve, bad knots)
  contract = 6,   // operation called in the wrong state
  parse = 7,      // sidecar / config / image syntax
  io = 8,         // filesystem and sequence layout
  config = 9,     // parameter values out of range
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::bounds: return "bounds";
    case ErrorKind::input: return "input";
    case ErrorKind::invariant: return "invariant";
    case ErrorKind::contract: return "contract";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace vidtone
