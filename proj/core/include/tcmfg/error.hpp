#pragma once

#include <stdexcept>
#include <string>

namespace tcmfg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error { using Error::Error; };
class InvalidMeasure : public Error { using Error::Error; };

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double estimate)
        : Error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

class ResolutionError : public Error { using Error::Error; };
class NoLyapunovError : public Error { using Error::Error; };
class NotDifferentiableError : public Error { using Error::Error; };
class InstabilityError : public Error { using Error::Error; };
class CflViolation : public Error { using Error::Error; };
class ConservationFault : public Error { using Error::Error; };
class LpError : public Error { using Error::Error; };
class SymbolError : public Error { using Error::Error; };

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what), line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

class ValidationError : public Error { using Error::Error; };

} // namespace tcmfg
