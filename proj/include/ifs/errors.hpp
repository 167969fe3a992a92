#pragma once

#include <stdexcept>
#include <string>

namespace ifs {

enum class Errc {
    NotContractive,
    EscapesSpace,
    PointOutsideSpace,
    SpaceMismatch,
    AlphabetMismatch,
    EmptySystem,
    TimeOutsideDomain,
    OriginNotInSpace,
    InvalidRatio,
    ResolutionMismatch,
    EmptyRaster,
    PrerequisiteFailed,
    ParseError,
    ValidationError,
    InvalidArgument,
};

const char* errc_name(Errc code);

// Single exception type for all domain errors; `code()` carries the
// machine-readable reason, what() a human-readable one.
class IfsError : public std::runtime_error {
public:
    IfsError(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace ifs
