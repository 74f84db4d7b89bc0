#include "ricperp/error.hpp"

#include <sstream>

namespace ricperp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NonUnitaryFrame: return "NonUnitaryFrame";
    case ErrorCode::UnsupportedFamilyRank: return "UnsupportedFamilyRank";
    case ErrorCode::OutOfTheoremRange: return "OutOfTheoremRange";
    case ErrorCode::LambdaTooSmall: return "LambdaTooSmall";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string describe(double residual, const std::array<int, 4>& w) {
  std::ostringstream os;
  os << "curvature symmetry violated: residual " << residual << " at index ("
     << w[0] << "," << w[1] << "," << w[2] << "," << w[3] << ")";
  return os.str();
}

}  // namespace

SymmetryViolation::SymmetryViolation(double residual, std::array<int, 4> where)
    : Error(ErrorCode::SymmetryViolation, describe(residual, where)),
      residual_(residual),
      where_(where) {}

}  // namespace ricperp
