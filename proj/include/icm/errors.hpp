#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace icm {

/// Broad failure classes. They map one-to-one onto CLI exit codes.
enum class ErrorClass {
    Input = 2,       ///< malformed user input (labels, coefficient lists, files)
    Validation = 3,  ///< input parsed but violates a mathematical invariant
    Internal = 4,    ///< postcondition or invariant breach inside the library
};

enum class ErrorKind {
    MalformedLabel,
    ParseError,
    FunctionalEquationViolated,
    NotSquarefree,
    NotOrdinaryNotPrimeField,
    NotOrdinary,
    FieldDataMismatch,
    MissingFieldData,
    NotAnOrder,
    DiscriminantCheckFailed,
    ValidationError,
    RankMismatch,
    IndexOverflow,
    PrecisionInsufficient,
    ZeroLambda,
    NotInvertible,
    TypeMismatch,
    RecursionBase,
    GenerationFailure,
    InvariantBreach,
};

std::string_view to_string(ErrorKind kind);
ErrorClass error_class(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string module, const std::string& what)
        : std::runtime_error("[" + module + "] " + std::string(to_string(kind)) + ": " + what),
          kind_(kind), module_(std::move(module)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& module() const { return module_; }
    ErrorClass error_class() const { return icm::error_class(kind_); }

  private:
    ErrorKind kind_;
    std::string module_;
};

/// Throws InvariantBreach when `cond` is false.
inline void ensure(bool cond, const char* module, const std::string& what) {
    if (!cond) throw Error(ErrorKind::InvariantBreach, module, what);
}

}  // namespace icm
