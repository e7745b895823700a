#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace upatl
{

/// 1-based line/column position in a source text.
struct SourceSpan
{
  std::size_t line = 0;
  std::size_t column = 0;

  std::string str() const { return std::to_string( line ) + ":" + std::to_string( column ); }
};

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// An identifier does not denote an element of the structure.
class UnknownIdError : public Error
{
public:
  using Error::Error;
};

/// A caller broke the documented precondition of an operation.
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// A joint action is available but the structure has no transition for it.
/// Only possible on structures that fail validation.
class MissingTransitionError : public Error
{
public:
  using Error::Error;
};

/// Strategy tree does not fit the requested enumeration.
class StrategyError : public Error
{
public:
  using Error::Error;
};

/// Oracle refused an instance beyond its enumeration budget.
class ResourceLimitError : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  ParseError( std::string const& message, SourceSpan span )
    : Error( span.str() + ": " + message ), span_( span ), message_( message )
  {
  }

  SourceSpan span() const { return span_; }
  std::string const& message() const { return message_; }

private:
  SourceSpan span_;
  std::string message_;
};

struct Diagnostic
{
  SourceSpan span;
  std::string message;
};

/// Name resolution or validation failure while binding a game document.
class BindError : public Error
{
public:
  explicit BindError( std::vector<Diagnostic> diagnostics )
    : Error( summarize( diagnostics ) ), diagnostics_( std::move( diagnostics ) )
  {
  }

  std::vector<Diagnostic> const& diagnostics() const { return diagnostics_; }

private:
  static std::string summarize( std::vector<Diagnostic> const& diagnostics )
  {
    std::string out;
    for ( auto const& d : diagnostics )
    {
      if ( !out.empty() )
        out += "\n";
      out += d.span.str() + ": " + d.message;
    }
    return out;
  }

  std::vector<Diagnostic> diagnostics_;
};

} // namespace upatl
