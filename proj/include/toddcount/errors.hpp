#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace toddcount {

/// Malformed input text. `line` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error
{
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// A fan failing validate_fan; the message carries the violation report.
class InvalidFan : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// The complement map is undefined on a cone the computation needs.
class NotInDomain : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

class NotSmooth : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

class DegeneratePolytope : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

class NonGenericFlag : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// The lattice-point formula produced a non-integer; always a bug.
class NonIntegerTotal : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

} // namespace toddcount
