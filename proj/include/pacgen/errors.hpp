#pragma once

#include <stdexcept>
#include <string>

namespace pacgen {

// Input outside the mathematical domain of an operation (delta >= 1, negative
// weights, absolute-continuity violations, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Shape mismatch between arguments (vector lengths, parameter counts).
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Valid request the implementation refuses to handle (e.g. grid oracle for m > 4).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A pipeline stage failed; the message carries the stage tag.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

// Malformed or invalid configuration; the message carries the field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pacgen
