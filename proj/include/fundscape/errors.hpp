#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fundscape {

enum class ErrorCode {
  // corpus
  kMalformedRecord,
  kDuplicateId,
  kUnknownDocType,
  kCensusYearBeforePubYear,
  kEmptyWhitelist,
  // lexicon
  kDuplicateDiseaseId,
  kEmptyPreferredName,
  kMalformedRow,
  // matcher
  kEmptyTermSet,
  kEmptyTerm,
  // funders
  kAliasCollision,
  kDuplicateFunderId,
  // indicators
  kEmptyCorpus,
  kMissingReferenceCell,
  kZeroExpected,
  kEmptyGroup,
  // configuration / io
  kInvalidConfig,
  kIoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A problem found while checking inputs. Diagnostics are values, not
// exceptions: validation collects all of them before anything runs.
struct Diagnostic {
  std::string stage;    // "config", "corpus", "lexicon", "funders", ...
  std::string message;  // human-readable, includes path/line where known
};

// One rejected input line, reported by the collecting loaders.
struct LoadIssue {
  int line = 0;  // 1-based line number, 0 when not line-scoped
  ErrorCode code = ErrorCode::kMalformedRecord;
  std::string message;
};

}  // namespace fundscape
