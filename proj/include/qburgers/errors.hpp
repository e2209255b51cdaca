#pragma once

// Error hierarchy shared by every module.  The CLI maps each family to a
// distinct process exit code, so library code should always throw one of
// these rather than a bare std::runtime_error:
//
//   ConfigError          -> exit 2   (bad configuration file, key, or value)
//   DomainError          -> exit 2   (argument outside an operation's domain)
//   ResourceCeilingError -> exit 3   (request exceeds the statevector budget)
//   NumericGuardError    -> exit 4   (runtime guard tripped on the data)

#include <stdexcept>
#include <string>

namespace qburgers {

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An argument lies outside the documented domain of an operation
/// (negative time, coarse level out of range, odd moment order, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested statevector or matrix would exceed the configured
/// memory ceiling.  Carries no data; the message names the offender.
class ResourceCeilingError : public std::runtime_error {
public:
    explicit ResourceCeilingError(const std::string& what) : std::runtime_error(what) {}
};

/// A runtime numerical guard fired: non-finite input, a division hazard,
/// a fully decayed norm, an ill-conditioned ratio denominator, and so on.
class NumericGuardError : public std::runtime_error {
public:
    explicit NumericGuardError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qburgers
