#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cstar {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands live in spaces of different dimension.
class DimensionMismatch : public Error {
public:
  DimensionMismatch(const std::string& where, std::size_t lhs, std::size_t rhs)
      : Error(where + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
              std::to_string(rhs) + ")") {}
};

/// A precondition on an argument value was violated (bad preset name,
/// non-symmetric matrix, rho <= 1, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A mathematical contract the library promises was found broken at run time.
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// Malformed serialized input.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Non-fatal diagnostics collected by numeric routines.
struct Warnings {
  std::vector<std::string> messages;
  void add(std::string m) { messages.push_back(std::move(m)); }
  bool empty() const { return messages.empty(); }
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

} // namespace cstar
