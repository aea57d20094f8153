#pragma once

#include <stdexcept>
#include <string>

namespace lz {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: malformed files, schema violations, unmet preconditions on
// arguments. The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, int line, int column)
        : ValidationError(what + " (line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ")"),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Numerical failure: non-convergence, singular metric, chart exit, ...
// Carries the best error estimate reached when one exists. Exit code 3.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, double achieved = -1.0)
        : Error(what), achieved_(achieved) {}

    double achieved_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Evaluation requested exactly at a pole of a meromorphic family.
class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace lz
