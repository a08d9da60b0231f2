#pragma once

#include <stdexcept>
#include <string>

namespace cda {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInvertible : Error { using Error::Error; };
struct DivByZero : Error { using Error::Error; };
struct UnknownVariable : Error { using Error::Error; };
struct SingularSubstitution : Error { using Error::Error; };
struct UnsupportedDenominator : Error { using Error::Error; };
struct NumericPole : Error { using Error::Error; };
struct NonConvergent : Error { using Error::Error; };
struct VarSetMismatch : Error { using Error::Error; };
struct DegreeError : Error { using Error::Error; };
struct SingularFrameChange : Error { using Error::Error; };
struct DegenerateFrame : Error { using Error::Error; };
struct MissingTransition : Error { using Error::Error; };
struct CoverMismatch : Error { using Error::Error; };
struct ZeroFunction : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace cda
