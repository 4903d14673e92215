#pragma once

#include <stdexcept>
#include <string>

namespace robba {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DivisionByZero : public Error {
public:
    explicit DivisionByZero(const std::string& what = "division by zero") : Error(what) {}
};

/// Raised when a result would carry no justified p-adic digits.
class PrecisionExhausted : public Error {
public:
    explicit PrecisionExhausted(const std::string& what) : Error(what) {}
};

class LevelMismatch : public Error {
public:
    explicit LevelMismatch(const std::string& what) : Error(what) {}
};

/// All coefficients vanish at the available precision; valuation undecidable.
class IndeterminateZero : public Error {
public:
    explicit IndeterminateZero(const std::string& what) : Error(what) {}
};

class NotInvertible : public Error {
public:
    explicit NotInvertible(const std::string& what) : Error(what) {}
};

class ProfileMismatch : public Error {
public:
    explicit ProfileMismatch(const std::string& what) : Error(what) {}
};

class WindowOverflow : public Error {
public:
    explicit WindowOverflow(const std::string& what) : Error(what) {}
};

class WindowTooSmall : public Error {
public:
    explicit WindowTooSmall(const std::string& what) : Error(what) {}
};

class LevelOutOfWindow : public Error {
public:
    explicit LevelOutOfWindow(const std::string& what) : Error(what) {}
};

/// Unit certification failed; carries a human-readable witness.
class NotAUnit : public Error {
public:
    explicit NotAUnit(const std::string& what) : Error(what) {}
};

class UnsupportedShape : public Error {
public:
    explicit UnsupportedShape(const std::string& what) : Error(what) {}
};

class HNJoinFailure : public Error {
public:
    explicit HNJoinFailure(const std::string& what) : Error(what) {}
};

class CertificateFailure : public Error {
public:
    explicit CertificateFailure(const std::string& what) : Error(what) {}
};

class NotLocallyTrivial : public Error {
public:
    explicit NotLocallyTrivial(const std::string& what) : Error(what) {}
};

class Unsupported : public Error {
public:
    explicit Unsupported(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

} // namespace robba
