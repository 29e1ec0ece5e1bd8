#pragma once

#include <stdexcept>
#include <string>

namespace confrec {

// Invalid input: malformed IFS documents, violated contraction, bad CLI values.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation precondition violated (symbol out of range, n outside the coding).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Enumeration or depth budget exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A root bracket or certified enclosure could not be established.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace confrec
