#include "proxframe/errors.hpp"

namespace proxframe {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::RankDeficient:
      return "RankDeficient";
    case ErrorKind::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::NonPositiveLambda:
      return "NonPositiveLambda";
    case ErrorKind::NotConverged:
      return "NotConverged";
    case ErrorKind::NotParsevalRow:
      return "NotParsevalRow";
    case ErrorKind::InvalidInput:
      return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace proxframe
