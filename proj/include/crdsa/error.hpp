#pragma once

#include <stdexcept>
#include <string>

namespace crdsa {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind {
  domain,      // argument outside the mathematical domain of an operation
  config,      // infeasible experiment configuration
  protocol,    // misuse of a stateful component (e.g. out-of-order ingest)
  input,       // unreadable or ill-formed input file
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline Error domain_error(const std::string &what) {
  return Error(ErrorKind::domain, what);
}
inline Error config_error(const std::string &what) {
  return Error(ErrorKind::config, what);
}
inline Error protocol_error(const std::string &what) {
  return Error(ErrorKind::protocol, what);
}
inline Error input_error(const std::string &what) {
  return Error(ErrorKind::input, what);
}

} // namespace crdsa
