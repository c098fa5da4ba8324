#include "voldist/error.hpp"

namespace voldist {

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotInside: return "NotInside";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::NotOnSurface: return "NotOnSurface";
    case ErrorKind::SingularMap: return "SingularMap";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::NonpositiveDepth: return "NonpositiveDepth";
    case ErrorKind::NotTransversal: return "NotTransversal";
    case ErrorKind::DomainExceeded: return "DomainExceeded";
    case ErrorKind::DegenerateSection: return "DegenerateSection";
    case ErrorKind::UnboundedCap: return "UnboundedCap";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::InsufficientLadder: return "InsufficientLadder";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace voldist
