#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmtok {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidEncoding : public Error {
public:
    InvalidEncoding() : Error("invalid UTF-8 input") {}
    explicit InvalidEncoding(const std::string& what) : Error(what) {}
};

// Errors that point at a 1-based line of an input file.
class LineError : public Error {
public:
    LineError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateToken : public LineError {
public:
    DuplicateToken(const std::string& token, std::size_t line)
        : LineError("duplicate token \"" + token + "\"", line) {}
};

class EmptyToken : public LineError {
public:
    explicit EmptyToken(std::size_t line) : LineError("empty token", line) {}
};

class MissingUnkToken : public Error {
public:
    explicit MissingUnkToken(const std::string& unk)
        : Error("vocabulary does not contain the unknown token \"" + unk + "\"") {}
};

class MalformedLine : public LineError {
public:
    MalformedLine(const std::string& what, std::size_t line) : LineError(what, line) {}
};

class DuplicateMerge : public LineError {
public:
    explicit DuplicateMerge(std::size_t line) : LineError("duplicate merge", line) {}
};

class WordTooLong : public Error {
public:
    WordTooLong(std::size_t length, std::size_t limit)
        : Error("word of " + std::to_string(length) +
                " characters exceeds the enumeration cap of " + std::to_string(limit)) {}
};

class EmptyHistogram : public Error {
public:
    EmptyHistogram() : Error("histogram has no tokens") {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace mmtok
