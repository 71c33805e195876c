#pragma once

#include <stdexcept>
#include <string>

namespace frmsm {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  MalformedHeader,
  Io,
  OutOfBounds,
  MarginTooLarge,
  IterationLimitExceeded,
  NotRidgePixel,
  OnBorder,
  NotThinned,
  NotTermination,
  NotBifurcation,
  ValleyNotFound,
  MalformedCsv,
  EmptySet,
  BadIndex,
  EmptyTemplate,
  EmptyInput,
  EmptyManifest,
  InvalidManifest,
  NeedTwoIdentities,
  Pipeline,
  InvalidConfig,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the
// message names the offending path, pixel, or key where there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace frmsm
