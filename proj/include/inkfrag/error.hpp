#pragma once

#include <stdexcept>
#include <string>

namespace inkfrag {

// Base class for all library errors. CLI maps these onto exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Stroke too short for the requested resampling step.
class DegenerateStroke : public Error {
public:
    explicit DegenerateStroke(const std::string& msg) : Error(msg) {}
};

// Fewer resampled points than the feature window needs.
class TooShort : public Error {
public:
    explicit TooShort(const std::string& msg) : Error(msg) {}
};

class InvalidParams : public Error {
public:
    explicit InvalidParams(const std::string& msg) : Error(msg) {}
};

class InvalidSpec : public Error {
public:
    explicit InvalidSpec(const std::string& msg) : Error(msg) {}
};

class EmptyObservations : public Error {
public:
    explicit EmptyObservations(const std::string& msg) : Error(msg) {}
};

class LengthMismatch : public Error {
public:
    explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace inkfrag
