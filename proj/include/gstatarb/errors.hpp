#pragma once

#include <stdexcept>
#include <string>

namespace gstatarb {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Model prices or weights violate the lattice orderings.
class InvalidModel : public Error {
public:
    using Error::Error;
};

/// A closed form would divide by zero, or the model admits classical arbitrage.
class DegenerateModel : public Error {
public:
    using Error::Error;
};

/// The model satisfies the no-statistical-arbitrage condition, so no strategy exists.
class NoSaExists : public Error {
public:
    using Error::Error;
};

class NoSolution : public Error {
public:
    using Error::Error;
};

class UnknownPath : public Error {
public:
    using Error::Error;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class InvalidBase : public Error {
public:
    using Error::Error;
};

class InvalidInterval : public Error {
public:
    using Error::Error;
};

class DegenerateSeries : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class EmptySample : public Error {
public:
    using Error::Error;
};

class AllRunsSkipped : public Error {
public:
    using Error::Error;
};

class NonMonotoneDates : public Error {
public:
    using Error::Error;
};

/// CSV or JSON input could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace gstatarb
