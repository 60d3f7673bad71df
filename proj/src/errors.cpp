#include "icm/errors.hpp"

namespace icm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::MalformedLabel: return "MalformedLabel";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FunctionalEquationViolated: return "FunctionalEquationViolated";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::NotOrdinaryNotPrimeField: return "NotOrdinaryNotPrimeField";
    case ErrorKind::NotOrdinary: return "NotOrdinary";
    case ErrorKind::FieldDataMismatch: return "FieldDataMismatch";
    case ErrorKind::MissingFieldData: return "MissingFieldData";
    case ErrorKind::NotAnOrder: return "NotAnOrder";
    case ErrorKind::DiscriminantCheckFailed: return "DiscriminantCheckFailed";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::IndexOverflow: return "IndexOverflow";
    case ErrorKind::PrecisionInsufficient: return "PrecisionInsufficient";
    case ErrorKind::ZeroLambda: return "ZeroLambda";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::RecursionBase: return "RecursionBase";
    case ErrorKind::GenerationFailure: return "GenerationFailure";
    case ErrorKind::InvariantBreach: return "InvariantBreach";
    }
    return "Unknown";
}

ErrorClass error_class(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::MalformedLabel:
    case ErrorKind::ParseError:
    case ErrorKind::MissingFieldData:
    case ErrorKind::IndexOverflow:
        return ErrorClass::Input;
    case ErrorKind::FunctionalEquationViolated:
    case ErrorKind::NotSquarefree:
    case ErrorKind::NotOrdinaryNotPrimeField:
    case ErrorKind::NotOrdinary:
    case ErrorKind::FieldDataMismatch:
    case ErrorKind::NotAnOrder:
    case ErrorKind::DiscriminantCheckFailed:
    case ErrorKind::ValidationError:
    case ErrorKind::RankMismatch:
    case ErrorKind::ZeroLambda:
    case ErrorKind::NotInvertible:
    case ErrorKind::TypeMismatch:
        return ErrorClass::Validation;
    default:
        return ErrorClass::Internal;
    }
}

}  // namespace icm
