#pragma once

#include <stdexcept>
#include <string>

namespace teda {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input values: non-finite samples, unparsable cells, empty inputs.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// Stream-shape violations: dimension mismatches, ragged rows.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Operation called on a state that cannot support it (e.g. k too small).
class StateError : public Error {
public:
    explicit StateError(const std::string& msg) : Error(msg) {}
};

// Eccentricity requested against a zero/negative variance. The detector
// front end never lets this escape (it applies the zero-variance policy);
// it is only thrown when the raw formula is called directly.
class DegenerateVarianceError : public StateError {
public:
    explicit DegenerateVarianceError(const std::string& msg) : StateError(msg) {}
};

// Invalid configuration: m <= 0, nonpositive critical path, bad synth spec.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace teda
