#pragma once

#include <stdexcept>
#include <string>

namespace salypath {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input value outside its mathematical domain (e.g. ERP coordinate >= 1).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two rasters or sequences that must agree in size do not.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents: bad magic, truncated payload, unparsable row.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Input that is structurally valid but degenerate for the requested
/// operation (all-zero maps, zero variance, empty fixation sets).
class DegenerateError : public Error {
public:
    using Error::Error;
};

} // namespace salypath
