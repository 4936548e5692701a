#pragma once

#include <stdexcept>
#include <string>

namespace orbitcert {

enum class ErrorCode {
    RankDeficient,
    RetractionDiverged,
    BlowUp,
    OutsideDomain,
    NearSingular,
    DegenerateZero,
    BoundaryZero,
    NotAdmissible,
    VanishingOnBoundary,
    AngleResidueTooLarge,
    NonHyperbolic,
    IndexMismatch,
    ReductionMismatch,
    NewtonDiverged,
    SingularJacobian,
};

const char* to_string(ErrorCode code);

/// Domain error: a mathematical hypothesis failed at runtime (CLI exit code 1).
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code) {}

    [[nodiscard]] ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

/// Configuration parse/validation error (CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    explicit ConfigError(const std::string& what)
        : std::runtime_error(what), line_(0) {}

    [[nodiscard]] int line() const { return line_; }

  private:
    int line_;
};

}  // namespace orbitcert
