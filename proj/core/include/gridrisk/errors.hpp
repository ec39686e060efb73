#pragma once

#include <stdexcept>
#include <string>

namespace gridrisk {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad call arguments (mismatched sizes, unknown ids, out-of-range knobs).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Inputs outside a mathematical domain (non-finite values, p outside (0,1)).
class DomainError : public Error {
public:
    using Error::Error;
};

// Statistical fit could not be carried out (degenerate data, rank deficiency).
class FitError : public Error {
public:
    using Error::Error;
};

// Numerical conditioning failure (singular correlation matrix etc.).
class ConditioningError : public Error {
public:
    using Error::Error;
};

// Configuration that cannot work (missing files, unusable sampler settings).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A should-not-happen state inside the library.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace gridrisk
