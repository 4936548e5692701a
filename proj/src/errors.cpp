#include "orbitcert/errors.hpp"

namespace orbitcert {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::RetractionDiverged: return "RetractionDiverged";
        case ErrorCode::BlowUp: return "BlowUp";
        case ErrorCode::OutsideDomain: return "OutsideDomain";
        case ErrorCode::NearSingular: return "NearSingular";
        case ErrorCode::DegenerateZero: return "DegenerateZero";
        case ErrorCode::BoundaryZero: return "BoundaryZero";
        case ErrorCode::NotAdmissible: return "NotAdmissible";
        case ErrorCode::VanishingOnBoundary: return "VanishingOnBoundary";
        case ErrorCode::AngleResidueTooLarge: return "AngleResidueTooLarge";
        case ErrorCode::NonHyperbolic: return "NonHyperbolic";
        case ErrorCode::IndexMismatch: return "IndexMismatch";
        case ErrorCode::ReductionMismatch: return "ReductionMismatch";
        case ErrorCode::NewtonDiverged: return "NewtonDiverged";
        case ErrorCode::SingularJacobian: return "SingularJacobian";
    }
    return "UnknownError";
}

}  // namespace orbitcert
