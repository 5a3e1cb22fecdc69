// error.hpp
// Exception hierarchy shared by every mlcorr module. The CLI maps these onto
// process exit codes (config 2, capacity 3).

#pragma once
#include <stdexcept>
#include <string>

namespace mlcorr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Index or length outside what a sequence provides.
class RangeError : public Error {
public:
    using Error::Error;
};

// Mathematical domain violation (s <= 1, rho <= 1, unsupported k, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Request exceeds the configured memory budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Invalid user configuration; carries the offending field name.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& msg)
        : Error(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Phase grid too coarse for the requested transform.
class GridResolutionError : public Error {
public:
    using Error::Error;
};

class CacheError : public Error {
public:
    using Error::Error;
};
class CacheFormatError : public CacheError {
public:
    using CacheError::CacheError;
};
class CacheVersionError : public CacheError {
public:
    using CacheError::CacheError;
};
class CacheChecksumError : public CacheError {
public:
    using CacheError::CacheError;
};
class CacheTruncatedError : public CacheError {
public:
    using CacheError::CacheError;
};

}  // namespace mlcorr
