#pragma once

#include <stdexcept>
#include <string>

namespace fsmkit {

// A spec refers to a name it never declared, or is otherwise malformed.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad run configuration: timer thresholds, stimulus/spec mismatch, pin maps.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The caller broke a precondition (e.g. stepping an unvalidated spec).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace fsmkit
