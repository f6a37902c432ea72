#pragma once

#include <stdexcept>
#include <string>

namespace sap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

struct NotPsd : Error {
    using Error::Error;
};

struct DegenerateSketch : Error {
    using Error::Error;
};

struct InvalidWeights : Error {
    using Error::Error;
};

struct InvalidStepsize : Error {
    using Error::Error;
};

struct InvalidFamilyParameter : Error {
    using Error::Error;
};

struct InvalidSpectrum : Error {
    using Error::Error;
};

struct DegenerateDistribution : Error {
    using Error::Error;
};

struct UnsupportedForEnumeration : Error {
    using Error::Error;
};

struct OracleUnavailable : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct NoViableStepsize : Error {
    using Error::Error;
};

struct DivergedError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

} // namespace sap
