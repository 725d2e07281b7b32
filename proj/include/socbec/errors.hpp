#pragma once

#include <stdexcept>
#include <string>

namespace socbec {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigenFailure : Error { using Error::Error; };
struct SingularResolvent : Error { using Error::Error; };
struct MarginalSpectrum : Error { using Error::Error; };
struct TrackingAmbiguity : Error { using Error::Error; };
struct BandDegeneracy : Error { using Error::Error; };
struct NonConvergedEigen : Error { using Error::Error; };
struct ZeroFrequency : Error { using Error::Error; };
struct EmptyGapWindow : Error { using Error::Error; };
struct BadGrid : Error { using Error::Error; };
struct SpecInvalid : Error { using Error::Error; };

// Per-point evaluation status carried through maps instead of exceptions.
enum class PointFlag { ok, singular_r, singular_x, zero_frequency };

inline const char* flag_label(PointFlag f) {
    switch (f) {
        case PointFlag::ok: return "";
        case PointFlag::singular_r: return "SINGULAR_R";
        case PointFlag::singular_x: return "SINGULAR_X";
        case PointFlag::zero_frequency: return "ZERO_FREQUENCY";
    }
    return "";
}

} // namespace socbec
