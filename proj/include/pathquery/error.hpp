#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pathquery {

struct SourceLoc {
    std::size_t line = 0;  // 1-based; 0 means unknown
    std::size_t column = 0;

    std::string str() const {
        if (line == 0) return {};
        return std::to_string(line) + ":" + std::to_string(column);
    }
};

enum class ErrorKind { Syntax, Link, Graph, Eval, Usage };

// Base of every error the library throws. The message never includes the
// location; `what()` does.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, SourceLoc loc = {}, std::string file = {})
        : std::runtime_error(format(message, loc, file)),
          kind_(kind),
          message_(std::move(message)),
          loc_(loc),
          file_(std::move(file)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& message() const { return message_; }
    const SourceLoc& loc() const { return loc_; }
    const std::string& file() const { return file_; }

private:
    static std::string format(const std::string& msg, const SourceLoc& loc, const std::string& file) {
        std::string out;
        if (!file.empty()) out += file + ":";
        if (loc.line != 0) out += loc.str() + ":";
        if (!out.empty()) out += " ";
        return out + msg;
    }

    ErrorKind kind_;
    std::string message_;
    SourceLoc loc_;
    std::string file_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::string message, SourceLoc loc = {}, std::string file = {})
        : Error(ErrorKind::Syntax, std::move(message), loc, std::move(file)) {}
};

// Import resolution and function linking failures.
class LinkError : public Error {
public:
    explicit LinkError(std::string message, SourceLoc loc = {}, std::string file = {})
        : Error(ErrorKind::Link, std::move(message), loc, std::move(file)) {}
};

// Malformed triple files.
class GraphError : public Error {
public:
    GraphError(std::string message, std::size_t line)
        : Error(ErrorKind::Graph, std::move(message), SourceLoc{line, 1}) {}
};

class EvalError : public Error {
public:
    explicit EvalError(std::string message, SourceLoc loc = {})
        : Error(ErrorKind::Eval, std::move(message), loc) {}
};

}  // namespace pathquery
