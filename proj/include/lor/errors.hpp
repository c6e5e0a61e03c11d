#pragma once

#include <stdexcept>
#include <string>

namespace lor {

// Base class for all library errors. Subclasses map onto the CLI exit
// codes: usage/parse -> 2, resource limit -> 3, construction -> 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

// Input could not be parsed (weights file, signs string, grid spec, ...).
class ParseError : public UsageError {
public:
    explicit ParseError(const std::string& msg) : UsageError(msg) {}
};

// Operand shapes disagree (sequence length vs sign-vector length, index
// out of range).
class DimensionError : public UsageError {
public:
    explicit DimensionError(const std::string& msg) : UsageError(msg) {}
};

// An exhaustive or memory-bounded operation was asked to exceed its
// configured limit.
class ResourceLimitError : public Error {
public:
    explicit ResourceLimitError(const std::string& msg) : Error(msg) {}
};

// A generator or transform cannot produce a valid object from the given
// parameters (n below a family minimum, unfixable parity, ...).
class ConstructionError : public Error {
public:
    explicit ConstructionError(const std::string& msg) : Error(msg) {}
};

class ParityError : public ConstructionError {
public:
    explicit ParityError(const std::string& msg) : ConstructionError(msg) {}
};

}  // namespace lor
