#include "fathom/errors.hpp"

namespace fathom {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::PointBehindCamera: return "PointBehindCamera";
    case Errc::NonPositiveRange: return "NonPositiveRange";
    case Errc::DegenerateConfiguration: return "DegenerateConfiguration";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::DegenerateRelativeMap: return "DegenerateRelativeMap";
    case Errc::InsufficientValidCells: return "InsufficientValidCells";
    case Errc::DegenerateRing: return "DegenerateRing";
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::EmptyLinkSet: return "EmptyLinkSet";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyDatabase: return "EmptyDatabase";
    case Errc::NoValidQueries: return "NoValidQueries";
    case Errc::EmptyStream: return "EmptyStream";
    case Errc::RayMiss: return "RayMiss";
    case Errc::FormatError: return "FormatError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace fathom
