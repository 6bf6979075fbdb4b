#pragma once

#include <stdexcept>
#include <string>

namespace evgof {

/// Invalid user input or configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tied observations encountered under TiePolicy::Reject (CLI exit code 3).
class TieError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate numeric situation, e.g. a constant rank vector (CLI exit code 4).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A dependence value outside the range attainable by the family.
class RangeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation not defined for the given family (e.g. Pickands function of a
/// non-extreme-value copula).
class UnsupportedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace evgof
