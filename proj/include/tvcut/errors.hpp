#pragma once

#include <stdexcept>
#include <string>

namespace tvcut {

// Error categories, mirrored by the CLI exit codes and the C API status values.
enum class ErrorKind {
  Config,      // inconsistent or out-of-range parameters
  Data,        // bad input files or malformed datasets
  Numerical,   // divergence, non-finite values
  Degenerate,  // constant functions, empty/full partitions
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) {
  throw Error(ErrorKind::Config, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
  throw Error(ErrorKind::Data, msg);
}
[[noreturn]] inline void throw_numerical(const std::string& msg) {
  throw Error(ErrorKind::Numerical, msg);
}
[[noreturn]] inline void throw_degenerate(const std::string& msg) {
  throw Error(ErrorKind::Degenerate, msg);
}

}  // namespace tvcut
