#include "ccm/error.hpp"

namespace ccm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "DimensionError";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Plan: return "PlanError";
    case ErrorKind::Pattern: return "PatternError";
    case ErrorKind::Singular: return "SingularError";
    case ErrorKind::Underdetermined: return "UnderdeterminedError";
    case ErrorKind::NotDecodable: return "NotDecodable";
    case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::OverheadExceeded: return "OverheadExceeded";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace ccm
