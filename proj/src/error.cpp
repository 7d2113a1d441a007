#include "lbblab/error.hpp"

namespace lbblab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::DegenerateElement: return "DegenerateElement";
    case ErrorCode::DofMismatch: return "DofMismatch";
    case ErrorCode::MissingParentMap: return "MissingParentMap";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionZero: return "DimensionZero";
    case ErrorCode::DimensionExceeded: return "DimensionExceeded";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoReference: return "NoReference";
    case ErrorCode::NotADiffeomorphism: return "NotADiffeomorphism";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace lbblab
