#include "fundscape/errors.hpp"

namespace fundscape {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownDocType: return "UnknownDocType";
    case ErrorCode::kCensusYearBeforePubYear: return "CensusYearBeforePubYear";
    case ErrorCode::kEmptyWhitelist: return "EmptyWhitelist";
    case ErrorCode::kDuplicateDiseaseId: return "DuplicateDiseaseId";
    case ErrorCode::kEmptyPreferredName: return "EmptyPreferredName";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kEmptyTermSet: return "EmptyTermSet";
    case ErrorCode::kEmptyTerm: return "EmptyTerm";
    case ErrorCode::kAliasCollision: return "AliasCollision";
    case ErrorCode::kDuplicateFunderId: return "DuplicateFunderId";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kMissingReferenceCell: return "MissingReferenceCell";
    case ErrorCode::kZeroExpected: return "ZeroExpected";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
  }
  return "UnknownError";
}


}  // namespace fundscape
