#include "tma/error.hpp"

namespace tma {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidOrders: return "invalid-orders";
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::Length: return "length";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Data: return "data";
    case ErrorKind::DegenerateGrid: return "degenerate-grid";
    case ErrorKind::KernelDegenerate: return "kernel-degenerate";
    case ErrorKind::InvalidDf: return "invalid-df";
    case ErrorKind::UndefinedAcf: return "undefined-acf";
    case ErrorKind::Experiment: return "experiment";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidOrders:
    case ErrorKind::InvalidSpec:
    case ErrorKind::Length:
    case ErrorKind::InvalidDf:
      return 2;
    case ErrorKind::Data:
    case ErrorKind::Parse:
    case ErrorKind::Io:
    case ErrorKind::DegenerateGrid:
    case ErrorKind::UndefinedAcf:
      return 3;
    case ErrorKind::Domain:
    case ErrorKind::KernelDegenerate:
    case ErrorKind::Experiment:
      return 4;
  }
  return 4;
}

}  // namespace tma
