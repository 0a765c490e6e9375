#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oraclekit {

/// Malformed text input. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A value violates the invariants of its type (complementary literals in a
/// term, overlapping quantifier sets, self-loops, ...).
class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A brute-force routine was asked to enumerate beyond its configured limit.
class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The NP-oracle could not produce a verdict (timeout, crash, unparseable output).
class OracleFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The oracle produced a verdict whose witness does not check out.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace oraclekit
