#pragma once

#include <stdexcept>
#include <string>

namespace xiform {

/// Error categories surfaced by the library. The CLI maps these onto its
/// documented exit codes; library users can switch on the code directly.
enum class errc {
  not_symmetric,
  dimension_mismatch,
  not_unimodular,
  wrong_parity,
  nonzero_signature,
  search_bound_exceeded,
  invariant_nonzero,
  precondition_violated,
  parse_error,
  missing_field,
  internal
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_symmetric: return "NotSymmetric";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::not_unimodular: return "NotUnimodular";
    case errc::wrong_parity: return "WrongParity";
    case errc::nonzero_signature: return "NonzeroSignature";
    case errc::search_bound_exceeded: return "SearchBoundExceeded";
    case errc::invariant_nonzero: return "InvariantNonzero";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::parse_error: return "ParseError";
    case errc::missing_field: return "MissingField";
    case errc::internal: return "InternalError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

} // namespace xiform
