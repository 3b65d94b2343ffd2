#pragma once

#include <stdexcept>
#include <string>

namespace spinbell {

// Values double as CLI exit codes.
enum class ErrorKind : int {
  input = 2,
  resource_cap = 3,
  numerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_input(const std::string& msg) { throw Error(ErrorKind::input, msg); }
[[noreturn]] inline void throw_cap(const std::string& msg) { throw Error(ErrorKind::resource_cap, msg); }
[[noreturn]] inline void throw_numerical(const std::string& msg) { throw Error(ErrorKind::numerical, msg); }

}  // namespace spinbell
