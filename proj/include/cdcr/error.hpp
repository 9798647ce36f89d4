// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <stdexcept>
#include <string>

namespace cdcr {

// Bad configuration: out-of-range parameters, unknown feature names,
// inconsistent thresholds. CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data: unparseable records, invalid dates, corrupt store
// segments, mismatched mention sets. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Value outside a function's domain (unequal-length Hamming inputs,
// non-positive relative-distance operands, letter-free soundex input).
// Signals that the caller picked the wrong function for the data.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cdcr
