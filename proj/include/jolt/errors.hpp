#ifndef JOLT_ERRORS_HPP
#define JOLT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jolt {

// Typed error codes. The CLI maps categories to exit codes
// (2 = parse, 3 = precondition, 4 = numeric failure).
enum class ErrorCode {
    Parse,
    FieldMismatch,
    ArityMismatch,
    IndexOutOfRange,
    DegreeCapExceeded,
    NonNilpotent,
    RegularityUnknown,
    PreconditionMJM,
    PreconditionViolated,
    SingularA,
    AsymmetricZeta,
    NotAShear,
    NotTripleNilpotent,
    NoRankNPoint,
    NotSymplectic,
    NotHomogeneous,
    VerificationFailed,
    IntegrabilityViolated,
    DegenerateMap,
    NoValidPoint,
    NumericFailure,
    Internal,
};

const char* error_name(ErrorCode code);

class JoltError : public std::runtime_error {
  public:
    JoltError(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* name() const { return error_name(code_); }

    // CLI exit code category.
    int exit_code() const {
        switch (code_) {
            case ErrorCode::Parse: return 2;
            case ErrorCode::NumericFailure: return 4;
            default: return 3;
        }
    }

  private:
    ErrorCode code_;
};

class ParseError : public JoltError {
  public:
    ParseError(std::size_t pos, const std::string& msg)
        : JoltError(ErrorCode::Parse, msg + " (at position " + std::to_string(pos) + ")"),
          pos_(pos) {}

    std::size_t position() const { return pos_; }

  private:
    std::size_t pos_;
};

} // namespace jolt

#endif
