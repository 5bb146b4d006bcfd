#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tma {

enum class ErrorKind {
  InvalidOrders,
  InvalidSpec,
  Length,
  Domain,
  Data,
  DegenerateGrid,
  KernelDegenerate,
  InvalidDf,
  UndefinedAcf,
  Experiment,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind drives
/// the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for an error kind: 2 validation, 3 data, 4 numerical.
int exit_code(ErrorKind kind);

}  // namespace tma
