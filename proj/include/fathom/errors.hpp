#pragma once

#include <stdexcept>
#include <string>

namespace fathom {

// Error conditions raised by the library. Validation-type conditions map to
// CLI exit code 2, data-type conditions to exit code 3.
enum class Errc {
  InvalidArgument,
  PointBehindCamera,
  NonPositiveRange,
  DegenerateConfiguration,
  EmptyInput,
  TooFewSamples,
  DegenerateRelativeMap,
  InsufficientValidCells,
  DegenerateRing,
  InvalidModel,
  EmptyLinkSet,
  DimensionMismatch,
  EmptyDatabase,
  NoValidQueries,
  EmptyStream,
  RayMiss,
  FormatError,
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace fathom
