// Error taxonomy shared by all shellkit headers.
#pragma once

#include <stdexcept>
#include <string>

namespace shellkit {

enum class ErrorCode {
    InvalidInput,          // non-finite or otherwise malformed numeric input
    NotSkew,               // axl() given a matrix with a symmetric part beyond tolerance
    NotSymmetric,          // spd_sqrt() given a matrix with a skew part beyond tolerance
    NotPSD,                // spd_sqrt() given a matrix with a genuinely negative eigenvalue
    Degenerate,            // singular parametrization / metric / near-zero determinant
    NotRotation,           // rotation field failed the orthogonality/determinant check
    PolarFailure,          // polar decomposition input below the determinant floor
    OutOfDomain,           // parameter point outside the patch (incl. finite-difference margin)
    InvalidMaterial,       // material parameters violate mu > 0, lambda + 2 mu > 0, ...
    InvalidGrid,           // minimizer grid too coarse
    NonConvergence,        // minimizer hit the iteration cap above tolerance
    QuadratureOrderInvalid,
    UnknownCatalogId,      // scenario names no known surface/deformation/rotation kind
    BadParameters,         // scenario parameters out of range or unknown JSON keys
    IncompatibleScenario,  // check cannot run on this scenario (e.g. plate-only check)
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::NotSkew: return "NotSkew";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::NotRotation: return "NotRotation";
        case ErrorCode::PolarFailure: return "PolarFailure";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::InvalidMaterial: return "InvalidMaterial";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::QuadratureOrderInvalid: return "QuadratureOrderInvalid";
        case ErrorCode::UnknownCatalogId: return "UnknownCatalogId";
        case ErrorCode::BadParameters: return "BadParameters";
        case ErrorCode::IncompatibleScenario: return "IncompatibleScenario";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace shellkit
