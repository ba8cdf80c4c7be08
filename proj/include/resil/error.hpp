#pragma once

#include <stdexcept>
#include <string>

namespace resil {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Chain has no unique limiting distribution (reducible or periodic).
class NonErgodic : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class MissingOracleInput : public Error {
public:
    using Error::Error;
};

class UnterminatedWindow : public Error {
public:
    using Error::Error;
};

class DegenerateRecovery : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// No path exists once the disruption region is removed.
class NoRoute : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error("config field '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace resil
