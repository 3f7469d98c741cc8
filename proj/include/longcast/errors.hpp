#ifndef LONGCAST_ERRORS_HPP_
#define LONGCAST_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace longcast
{

/// A value lies outside the domain of a loss function or data format.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Malformed arguments: dimension mismatch, bad parameters, unknown names.
class ArgumentError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration would exceed its configured guard.
class CapacityError : public std::length_error
{
public:
  using std::length_error::length_error;
};

/// Malformed input file; the message carries the 1-based line number.
class ParseError : public std::runtime_error
{
public:
  ParseError(std::size_t line, const std::string & what)
  : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
  {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace longcast

#endif  // LONGCAST_ERRORS_HPP_
