#include "augscout/errors.hpp"

namespace augscout {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateCrop: return "DegenerateCrop";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DatasetUnavailable: return "DatasetUnavailable";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::PluginFailure: return "PluginFailure";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::AllRunsFailed: return "AllRunsFailed";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::PartialCompletion: return "PartialCompletion";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::EmptyCurve: return "EmptyCurve";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NoClasses: return "NoClasses";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::FixtureCorrupt: return "FixtureCorrupt";
    case ErrorCode::RenderFailure: return "RenderFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace augscout
