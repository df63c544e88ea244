#pragma once

#include <stdexcept>
#include <string>

namespace pdiv {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands belong to different fields/rings/shapes.
struct MixedParents : Error {
    explicit MixedParents(const std::string& what) : Error(what) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

/// A result would depend on p-adic digits beyond the certified precision.
/// `depth` is the number of digits that were still reliable at the failure point.
struct PrecisionExhausted : Error {
    int depth;
    explicit PrecisionExhausted(const std::string& what, int depth_reached = 0)
        : Error(what), depth(depth_reached) {}
};

/// Requested subfield F_{p^d} does not embed (d does not divide the degree).
struct UnsupportedResidueField : Error {
    explicit UnsupportedResidueField(const std::string& what) : Error(what) {}
};

/// A vector expected in normalized position (leading index 0) is not.
struct NotNormalized : Error {
    explicit NotNormalized(const std::string& what) : Error(what) {}
};

/// A worklist/fixed-point computation exceeded its iteration cap.
struct IterationCap : Error {
    explicit IterationCap(const std::string& what) : Error(what) {}
};

struct ZeroVector : Error {
    explicit ZeroVector(const std::string& what) : Error(what) {}
};

struct NonCoprime : Error {
    explicit NonCoprime(const std::string& what) : Error(what) {}
};

/// Normalization shift of a cycle failed to be integral; indicates a bug,
/// the combinatorial equivalence guarantees integrality.
struct ShiftNotIntegral : Error {
    explicit ShiftNotIntegral(const std::string& what) : Error(what) {}
};

struct NotASemimodule : Error {
    explicit NotASemimodule(const std::string& what) : Error(what) {}
};

/// The two dimension formulas disagreed; must never fire.
struct FormulaMismatch : Error {
    explicit FormulaMismatch(const std::string& what) : Error(what) {}
};

struct BadCoordinateIndex : Error {
    explicit BadCoordinateIndex(const std::string& what) : Error(what) {}
};

struct NoBiPart : Error {
    explicit NoBiPart(const std::string& what) : Error(what) {}
};

/// Grammar error; `pos` is a 0-based offset into the input.
struct ParseError : Error {
    size_t pos;
    ParseError(const std::string& what, size_t position) : Error(what), pos(position) {}
};

} // namespace pdiv
