#pragma once

#include <stdexcept>
#include <string>

namespace defeig {

enum class ErrorKind {
  kInvalidInput,
  kPrecondition,
  kConvergence,
  kSplitFailure,
  kBreakdown,
  kNumericalRank,
  kIo,
};

const char* to_string(ErrorKind kind);

// Process exit code used by the command-line tools for each error kind:
// 2 precondition/invalid input, 3 convergence or split failure, 4 I/O.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace defeig
