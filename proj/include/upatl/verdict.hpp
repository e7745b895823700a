#pragma once

#include <cstdint>
#include <ostream>
#include <string_view>

namespace upatl
{

/// Result of bounded checking. TRUE and FALSE are conclusive, UNKNOWN means
/// the horizon was too short to decide.
enum class Verdict : std::uint8_t
{
  False,
  Unknown,
  True
};

constexpr Verdict lift( bool b ) { return b ? Verdict::True : Verdict::False; }

/* strong Kleene connectives */
constexpr Verdict operator!( Verdict v )
{
  switch ( v )
  {
  case Verdict::True:
    return Verdict::False;
  case Verdict::False:
    return Verdict::True;
  default:
    return Verdict::Unknown;
  }
}

constexpr Verdict operator&&( Verdict a, Verdict b )
{
  if ( a == Verdict::False || b == Verdict::False )
    return Verdict::False;
  if ( a == Verdict::True && b == Verdict::True )
    return Verdict::True;
  return Verdict::Unknown;
}

constexpr Verdict operator||( Verdict a, Verdict b ) { return !( !a && !b ); }

constexpr std::string_view to_string( Verdict v )
{
  switch ( v )
  {
  case Verdict::True:
    return "TRUE";
  case Verdict::False:
    return "FALSE";
  default:
    return "UNKNOWN";
  }
}

inline std::ostream& operator<<( std::ostream& os, Verdict v ) { return os << to_string( v ); }

} // namespace upatl
