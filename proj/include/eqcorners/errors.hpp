#pragma once

#include <stdexcept>
#include <string>

namespace eqc {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Ambient dimensions of two operands disagree.
struct DimensionMismatch : Error {
    using Error::Error;
};

// Group closure exceeded the configured element cap.
struct CapExceeded : Error {
    using Error::Error;
};

// A group generator or element fails exact orthogonality.
struct NotOrthogonal : Error {
    using Error::Error;
};

struct UnsupportedModel : Error {
    using Error::Error;
};

struct CenterNotPSubmanifold : Error {
    using Error::Error;
};

struct CollectionNotDisjoint : Error {
    using Error::Error;
};

struct CollectionNotInvariant : Error {
    using Error::Error;
};

struct UnverifiedInput : Error {
    using Error::Error;
};

struct StratumEmpty : Error {
    using Error::Error;
};

struct FaceEmpty : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace eqc
