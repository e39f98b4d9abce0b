#pragma once

#include <stdexcept>
#include <string>

namespace regrasp {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (mesh, config). Carries a human-readable location.
class ParseError : public Error {
public:
    ParseError(const std::string& file, long offset, const std::string& msg)
        : Error(file + ":" + std::to_string(offset) + ": " + msg),
          file_(file), offset_(offset) {}
    const std::string& file() const { return file_; }
    long offset() const { return offset_; }

private:
    std::string file_;
    long offset_;
};

class InvalidInputError : public Error {
public:
    using Error::Error;
};

// Degenerate geometry where a well-formed solid is required.
class DegenerateError : public Error {
public:
    using Error::Error;
};

class StoreError : public Error {
public:
    using Error::Error;
};

// A reorientation query that cannot be answered. `stage` names the first
// filter that emptied the candidate set ("collision", "ik", "disconnected").
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& stage, const std::string& msg)
        : Error(msg), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace regrasp
