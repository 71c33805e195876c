#include "frmsm/error.hpp"

namespace frmsm {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::MarginTooLarge: return "MarginTooLarge";
    case ErrorCode::IterationLimitExceeded: return "IterationLimitExceeded";
    case ErrorCode::NotRidgePixel: return "NotRidgePixel";
    case ErrorCode::OnBorder: return "OnBorder";
    case ErrorCode::NotThinned: return "NotThinned";
    case ErrorCode::NotTermination: return "NotTermination";
    case ErrorCode::NotBifurcation: return "NotBifurcation";
    case ErrorCode::ValleyNotFound: return "ValleyNotFound";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::EmptyTemplate: return "EmptyTemplate";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::InvalidManifest: return "InvalidManifest";
    case ErrorCode::NeedTwoIdentities: return "NeedTwoIdentities";
    case ErrorCode::Pipeline: return "PipelineError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace frmsm
