#pragma once

#include <stdexcept>
#include <string>

namespace laryngen {

// Base for all library errors. Subtypes exist where callers need to
// distinguish (infeasible guesses are retried, contract errors are not).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Out-of-range coordinates, invalid block/sub-block refs.
class BoundsError : public Error {
public:
    using Error::Error;
};

// Caller violated a documented precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

// A guess stage found no candidate. Generators resample on this.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Pixel color not in the active palette, bad magic, truncated file.
class DecodeError : public Error {
public:
    using Error::Error;
};

// Flood fill escaped the contour.
class OpenContourError : public Error {
public:
    using Error::Error;
};

// Brute-force oracle asked to enumerate past its bound.
class OracleBoundError : public Error {
public:
    using Error::Error;
};

} // namespace laryngen
