#pragma once

#include "model.hpp"

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace upatl
{

struct PathFormula;
struct CapFormula;

using PathPtr = std::shared_ptr<PathFormula const>;
using CapPtr = std::shared_ptr<CapFormula const>;

/* capacity formulae: characterize sets of complete capacity assignments */

struct HasCap
{
  AgentId agent;
  CapacityId capacity;
};

struct CapNot
{
  CapPtr arg;
};

struct CapAnd
{
  CapPtr lhs, rhs;
};

struct CapFormula
{
  std::variant<HasCap, CapNot, CapAnd> node;
};

/* temporal formulae: only ever directly below a strategic operator */

struct Next
{
  PathPtr arg;
};

struct Until
{
  PathPtr lhs, rhs;
};

struct Release
{
  PathPtr lhs, rhs;
};

struct TemporalFormula
{
  std::variant<Next, Until, Release> node;
};

/* path formulae */

struct Atom
{
  PropId prop;
};

struct Know
{
  AgentId agent;
  CapPtr arg;
};

struct Not
{
  PathPtr arg;
};

struct And
{
  PathPtr lhs, rhs;
};

struct Strat
{
  std::vector<AgentId> coalition; ///< sorted, duplicate-free, possibly empty
  TemporalFormula goal;
};

struct PathFormula
{
  std::variant<Atom, Know, Not, And, Strat> node;
};

/* structural equality */

bool operator==( CapFormula const& x, CapFormula const& y );
bool operator==( PathFormula const& x, PathFormula const& y );
bool operator==( TemporalFormula const& x, TemporalFormula const& y );

namespace detail
{

template<class T>
bool deep_equal( std::shared_ptr<T const> const& x, std::shared_ptr<T const> const& y )
{
  if ( x == y )
    return true;
  if ( !x || !y )
    return false;
  return *x == *y;
}

} // namespace detail

inline bool operator==( HasCap const& x, HasCap const& y ) { return x.agent == y.agent && x.capacity == y.capacity; }
inline bool operator==( CapNot const& x, CapNot const& y ) { return detail::deep_equal( x.arg, y.arg ); }
inline bool operator==( CapAnd const& x, CapAnd const& y )
{
  return detail::deep_equal( x.lhs, y.lhs ) && detail::deep_equal( x.rhs, y.rhs );
}
inline bool operator==( CapFormula const& x, CapFormula const& y ) { return x.node == y.node; }

inline bool operator==( Next const& x, Next const& y ) { return detail::deep_equal( x.arg, y.arg ); }
inline bool operator==( Until const& x, Until const& y )
{
  return detail::deep_equal( x.lhs, y.lhs ) && detail::deep_equal( x.rhs, y.rhs );
}
inline bool operator==( Release const& x, Release const& y )
{
  return detail::deep_equal( x.lhs, y.lhs ) && detail::deep_equal( x.rhs, y.rhs );
}
inline bool operator==( TemporalFormula const& x, TemporalFormula const& y ) { return x.node == y.node; }

inline bool operator==( Atom const& x, Atom const& y ) { return x.prop == y.prop; }
inline bool operator==( Know const& x, Know const& y ) { return x.agent == y.agent && detail::deep_equal( x.arg, y.arg ); }
inline bool operator==( Not const& x, Not const& y ) { return detail::deep_equal( x.arg, y.arg ); }
inline bool operator==( And const& x, And const& y )
{
  return detail::deep_equal( x.lhs, y.lhs ) && detail::deep_equal( x.rhs, y.rhs );
}
inline bool operator==( Strat const& x, Strat const& y ) { return x.coalition == y.coalition && x.goal == y.goal; }
inline bool operator==( PathFormula const& x, PathFormula const& y ) { return x.node == y.node; }

/* constructors; the sugared connectives expand into the core grammar */

inline CapPtr has_cap( AgentId a, CapacityId c ) { return std::make_shared<CapFormula const>( CapFormula{ HasCap{ a, c } } ); }
inline CapPtr cap_not( CapPtr x ) { return std::make_shared<CapFormula const>( CapFormula{ CapNot{ std::move( x ) } } ); }
inline CapPtr cap_and( CapPtr x, CapPtr y )
{
  return std::make_shared<CapFormula const>( CapFormula{ CapAnd{ std::move( x ), std::move( y ) } } );
}
inline CapPtr cap_or( CapPtr x, CapPtr y ) { return cap_not( cap_and( cap_not( std::move( x ) ), cap_not( std::move( y ) ) ) ); }

inline PathPtr atom( PropId p ) { return std::make_shared<PathFormula const>( PathFormula{ Atom{ p } } ); }
inline PathPtr know( AgentId a, CapPtr x ) { return std::make_shared<PathFormula const>( PathFormula{ Know{ a, std::move( x ) } } ); }
inline PathPtr neg( PathPtr x ) { return std::make_shared<PathFormula const>( PathFormula{ Not{ std::move( x ) } } ); }
inline PathPtr conj( PathPtr x, PathPtr y )
{
  return std::make_shared<PathFormula const>( PathFormula{ And{ std::move( x ), std::move( y ) } } );
}
inline PathPtr disj( PathPtr x, PathPtr y ) { return neg( conj( neg( std::move( x ) ), neg( std::move( y ) ) ) ); }
inline PathPtr implies( PathPtr x, PathPtr y ) { return neg( conj( std::move( x ), neg( std::move( y ) ) ) ); }
inline PathPtr truth() { return atom( top_prop ); }
inline PathPtr falsity() { return neg( truth() ); }

inline PathPtr strat( std::vector<AgentId> coalition, TemporalFormula goal )
{
  std::sort( coalition.begin(), coalition.end() );
  coalition.erase( std::unique( coalition.begin(), coalition.end() ), coalition.end() );
  return std::make_shared<PathFormula const>( PathFormula{ Strat{ std::move( coalition ), std::move( goal ) } } );
}

inline TemporalFormula next( PathPtr x ) { return TemporalFormula{ Next{ std::move( x ) } }; }
inline TemporalFormula until( PathPtr x, PathPtr y ) { return TemporalFormula{ Until{ std::move( x ), std::move( y ) } }; }
inline TemporalFormula release( PathPtr x, PathPtr y ) { return TemporalFormula{ Release{ std::move( x ), std::move( y ) } }; }
inline TemporalFormula eventually( PathPtr x ) { return until( truth(), std::move( x ) ); }
inline TemporalFormula always( PathPtr x ) { return release( falsity(), std::move( x ) ); }

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded( Ts... ) -> overloaded<Ts...>;

inline std::size_t depth( CapFormula const& f )
{
  return std::visit( overloaded{ []( HasCap const& ) -> std::size_t { return 1; },
                                 []( CapNot const& n ) { return 1 + depth( *n.arg ); },
                                 []( CapAnd const& n ) { return 1 + std::max( depth( *n.lhs ), depth( *n.rhs ) ); } },
                     f.node );
}

/// AST depth. A strategic operator and its temporal operator count as one level.
inline std::size_t depth( PathFormula const& f )
{
  return std::visit(
      overloaded{ []( Atom const& ) -> std::size_t { return 1; },
                  []( Know const& n ) { return 1 + depth( *n.arg ); },
                  []( Not const& n ) { return 1 + depth( *n.arg ); },
                  []( And const& n ) { return 1 + std::max( depth( *n.lhs ), depth( *n.rhs ) ); },
                  []( Strat const& n ) {
                    return 1 + std::visit( overloaded{ []( Next const& t ) { return depth( *t.arg ); },
                                                       []( auto const& t ) { return std::max( depth( *t.lhs ), depth( *t.rhs ) ); } },
                                           n.goal.node );
                  } },
      f.node );
}

/* parsing */

enum class FormulaErrorKind
{
  Syntax,
  UnknownIdentifier,
  TemporalOutsideStrategic
};

class FormulaError : public ParseError
{
public:
  FormulaError( FormulaErrorKind kind, std::string const& message, SourceSpan span )
    : ParseError( message, span ), kind_( kind )
  {
  }

  FormulaErrorKind kind() const { return kind_; }

private:
  FormulaErrorKind kind_;
};

namespace detail
{

class FormulaParser
{
public:
  FormulaParser( std::string_view text, GameStructure const& g ) : text_( text ), g_( g ) { advance(); }

  PathPtr parse()
  {
    auto f = parse_implies();
    if ( tok_.kind != Tok::End )
      fail( "unexpected '" + tok_.text + "'" );
    return f;
  }

private:
  enum class Tok
  {
    Ident,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bang,
    Amp,
    Bar,
    Arrow,
    LStrat,
    RStrat,
    Eq,
    End
  };

  struct Token
  {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
  };

  [[noreturn]] void fail( std::string const& msg, FormulaErrorKind kind = FormulaErrorKind::Syntax ) const
  {
    throw FormulaError( kind, msg, tok_.span );
  }

  Token lex()
  {
    while ( pos_ < text_.size() && std::isspace( static_cast<unsigned char>( text_[pos_] ) ) )
    {
      if ( text_[pos_] == '\n' )
      {
        ++line_;
        line_start_ = pos_ + 1;
      }
      ++pos_;
    }
    Token t;
    t.span = SourceSpan{ line_, pos_ - line_start_ + 1 };
    if ( pos_ == text_.size() )
      return t;

    char const c = text_[pos_];
    auto two = [&]( char d ) { return pos_ + 1 < text_.size() && text_[pos_ + 1] == d; };
    auto single = [&]( Tok k, std::size_t n ) {
      t.kind = k;
      t.text = std::string( text_.substr( pos_, n ) );
      pos_ += n;
      return t;
    };

    if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
    {
      std::size_t const start = pos_;
      while ( pos_ < text_.size() && ( std::isalnum( static_cast<unsigned char>( text_[pos_] ) ) || text_[pos_] == '_' ) )
        ++pos_;
      t.kind = Tok::Ident;
      t.text = std::string( text_.substr( start, pos_ - start ) );
      return t;
    }
    switch ( c )
    {
    case '(':
      return single( Tok::LParen, 1 );
    case ')':
      return single( Tok::RParen, 1 );
    case '[':
      return single( Tok::LBracket, 1 );
    case ']':
      return single( Tok::RBracket, 1 );
    case ',':
      return single( Tok::Comma, 1 );
    case '!':
      return single( Tok::Bang, 1 );
    case '&':
      return single( Tok::Amp, 1 );
    case '|':
      return single( Tok::Bar, 1 );
    case '=':
      return single( Tok::Eq, 1 );
    case '-':
      if ( two( '>' ) )
        return single( Tok::Arrow, 2 );
      break;
    case '<':
      if ( two( '<' ) )
        return single( Tok::LStrat, 2 );
      break;
    case '>':
      if ( two( '>' ) )
        return single( Tok::RStrat, 2 );
      break;
    default:
      break;
    }
    t.text = std::string( 1, c );
    throw FormulaError( FormulaErrorKind::Syntax, "unexpected character '" + t.text + "'", t.span );
  }

  void advance()
  {
    if ( peeked_ )
    {
      tok_ = std::move( *peeked_ );
      peeked_.reset();
    }
    else
      tok_ = lex();
  }

  Token const& peek()
  {
    if ( !peeked_ )
      peeked_ = lex();
    return *peeked_;
  }

  void expect( Tok k, char const* what )
  {
    if ( tok_.kind != k )
      fail( std::string( "expected " ) + what );
    advance();
  }

  std::string ident( char const* what )
  {
    if ( tok_.kind != Tok::Ident )
      fail( std::string( "expected " ) + what );
    auto s = tok_.text;
    advance();
    return s;
  }

  static bool starts_formula( Tok k ) { return k == Tok::Ident || k == Tok::LParen || k == Tok::Bang || k == Tok::LStrat; }

  AgentId agent()
  {
    auto const span = tok_.span;
    auto const name = ident( "agent name" );
    auto a = g_.find_agent( name );
    if ( !a )
      throw FormulaError( FormulaErrorKind::UnknownIdentifier, "unknown agent '" + name + "'", span );
    return *a;
  }

  PathPtr parse_implies()
  {
    auto lhs = parse_or();
    if ( tok_.kind == Tok::Arrow )
    {
      advance();
      return implies( std::move( lhs ), parse_implies() );
    }
    return lhs;
  }

  PathPtr parse_or()
  {
    auto lhs = parse_and();
    while ( tok_.kind == Tok::Bar )
    {
      advance();
      lhs = disj( std::move( lhs ), parse_and() );
    }
    return lhs;
  }

  PathPtr parse_and()
  {
    auto lhs = parse_unary();
    while ( tok_.kind == Tok::Amp )
    {
      advance();
      lhs = conj( std::move( lhs ), parse_unary() );
    }
    return lhs;
  }

  PathPtr parse_unary()
  {
    switch ( tok_.kind )
    {
    case Tok::Bang:
      advance();
      return neg( parse_unary() );
    case Tok::LParen:
    {
      advance();
      auto inner = parse_implies();
      expect( Tok::RParen, "')'" );
      if ( tok_.kind == Tok::Ident && ( tok_.text == "U" || tok_.text == "R" ) && starts_formula( peek().kind ) )
        fail( "temporal operator '" + tok_.text + "' outside a strategic operator", FormulaErrorKind::TemporalOutsideStrategic );
      return inner;
    }
    case Tok::LStrat:
      return parse_strat();
    case Tok::Ident:
      return parse_ident();
    default:
      fail( tok_.kind == Tok::End ? "unexpected end of formula" : "unexpected '" + tok_.text + "'" );
    }
  }

  PathPtr parse_ident()
  {
    auto const name = tok_.text;
    auto const span = tok_.span;
    if ( name == "K" && peek().kind == Tok::LBracket )
    {
      advance();
      advance();
      auto const a = agent();
      expect( Tok::RBracket, "']'" );
      expect( Tok::LParen, "'('" );
      auto body = parse_cap_or();
      expect( Tok::RParen, "')'" );
      return know( a, std::move( body ) );
    }
    if ( ( name == "N" || name == "F" || name == "G" ) && starts_formula( peek().kind ) )
      fail( "temporal operator '" + name + "' outside a strategic operator", FormulaErrorKind::TemporalOutsideStrategic );
    advance();
    if ( name == "true" )
      return truth();
    if ( name == "false" )
      return falsity();
    auto p = g_.find_prop( name );
    if ( !p )
      throw FormulaError( FormulaErrorKind::UnknownIdentifier, "unknown proposition '" + name + "'", span );
    return atom( *p );
  }

  PathPtr parse_strat()
  {
    advance();
    std::vector<AgentId> coalition;
    if ( tok_.kind != Tok::RStrat )
    {
      coalition.push_back( agent() );
      while ( tok_.kind == Tok::Comma )
      {
        advance();
        coalition.push_back( agent() );
      }
    }
    expect( Tok::RStrat, "'>>'" );
    return strat( std::move( coalition ), parse_temporal() );
  }

  TemporalFormula parse_temporal()
  {
    if ( tok_.kind == Tok::Ident )
    {
      auto const op = tok_.text;
      if ( op == "N" || op == "F" || op == "G" )
      {
        advance();
        auto arg = parse_unary();
        if ( op == "N" )
          return next( std::move( arg ) );
        return op == "F" ? eventually( std::move( arg ) ) : always( std::move( arg ) );
      }
      fail( "expected temporal operator after '>>'" );
    }
    if ( tok_.kind != Tok::LParen )
      fail( "expected temporal operator after '>>'" );
    advance();
    auto lhs = parse_implies();
    expect( Tok::RParen, "')'" );
    if ( tok_.kind != Tok::Ident || ( tok_.text != "U" && tok_.text != "R" ) )
      fail( "expected 'U' or 'R'" );
    bool const is_until = tok_.text == "U";
    advance();
    auto rhs = parse_unary();
    return is_until ? until( std::move( lhs ), std::move( rhs ) ) : release( std::move( lhs ), std::move( rhs ) );
  }

  CapPtr parse_cap_or()
  {
    auto lhs = parse_cap_and();
    while ( tok_.kind == Tok::Bar )
    {
      advance();
      lhs = cap_or( std::move( lhs ), parse_cap_and() );
    }
    return lhs;
  }

  CapPtr parse_cap_and()
  {
    auto lhs = parse_cap_unary();
    while ( tok_.kind == Tok::Amp )
    {
      advance();
      lhs = cap_and( std::move( lhs ), parse_cap_unary() );
    }
    return lhs;
  }

  CapPtr parse_cap_unary()
  {
    if ( tok_.kind == Tok::Bang )
    {
      advance();
      return cap_not( parse_cap_unary() );
    }
    if ( tok_.kind == Tok::LParen )
    {
      advance();
      auto inner = parse_cap_or();
      expect( Tok::RParen, "')'" );
      return inner;
    }
    auto const a = agent();
    expect( Tok::Eq, "'='" );
    auto const span = tok_.span;
    auto const name = ident( "capacity name" );
    auto c = g_.find_capacity( name );
    if ( !c )
      throw FormulaError( FormulaErrorKind::UnknownIdentifier, "unknown capacity '" + name + "'", span );
    return has_cap( a, *c );
  }

  std::string_view text_;
  GameStructure const& g_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
  Token tok_;
  std::optional<Token> peeked_;
};

} // namespace detail

/// Parses the concrete formula syntax and resolves names against `g`.
/// Disjunction, implication, true/false, F and G are expanded into the core
/// connectives.
inline PathPtr parse_formula( std::string_view text, GameStructure const& g )
{
  return detail::FormulaParser( text, g ).parse();
}

/* rendering */

namespace detail
{

// binding strength of the printed form: 0 ->, 1 |, 2 &, 3 unary
inline std::string parens_if( bool p, std::string s ) { return p ? "(" + s + ")" : s; }

inline bool is_top( PathFormula const& f )
{
  auto const* a = std::get_if<Atom>( &f.node );
  return a && a->prop == top_prop;
}

inline PathFormula const* negated( PathFormula const& f )
{
  auto const* n = std::get_if<Not>( &f.node );
  return n ? n->arg.get() : nullptr;
}

inline CapFormula const* negated( CapFormula const& f )
{
  auto const* n = std::get_if<CapNot>( &f.node );
  return n ? n->arg.get() : nullptr;
}

inline std::string render_cap( CapFormula const& f, GameStructure const& g, int level )
{
  if ( auto const* h = std::get_if<HasCap>( &f.node ) )
    return g.agent_name( h->agent ) + "=" + g.capacity_name( h->capacity );
  if ( auto const* inner = negated( f ) )
  {
    if ( auto const* a = std::get_if<CapAnd>( &inner->node ) )
    {
      auto const* l = negated( *a->lhs );
      auto const* r = negated( *a->rhs );
      if ( l && r )
        return parens_if( level > 1, render_cap( *l, g, 1 ) + " | " + render_cap( *r, g, 2 ) );
    }
    return "!" + render_cap( *inner, g, 3 );
  }
  auto const& a = std::get<CapAnd>( f.node );
  return parens_if( level > 2, render_cap( *a.lhs, g, 2 ) + " & " + render_cap( *a.rhs, g, 3 ) );
}

inline std::string render_path( PathFormula const& f, GameStructure const& g, int level );

inline std::string render_goal( TemporalFormula const& t, GameStructure const& g )
{
  return std::visit( overloaded{ [&]( Next const& n ) { return "N " + render_path( *n.arg, g, 3 ); },
                                 [&]( Until const& u ) {
                                   if ( is_top( *u.lhs ) )
                                     return "F " + render_path( *u.rhs, g, 3 );
                                   return "(" + render_path( *u.lhs, g, 0 ) + ") U (" + render_path( *u.rhs, g, 0 ) + ")";
                                 },
                                 [&]( Release const& r ) {
                                   if ( auto const* l = negated( *r.lhs ); l && is_top( *l ) )
                                     return "G " + render_path( *r.rhs, g, 3 );
                                   return "(" + render_path( *r.lhs, g, 0 ) + ") R (" + render_path( *r.rhs, g, 0 ) + ")";
                                 } },
                     t.node );
}

inline std::string render_path( PathFormula const& f, GameStructure const& g, int level )
{
  if ( auto const* a = std::get_if<Atom>( &f.node ) )
    return g.prop_name( a->prop );
  if ( auto const* k = std::get_if<Know>( &f.node ) )
    return "K[" + g.agent_name( k->agent ) + "](" + render_cap( *k->arg, g, 0 ) + ")";
  if ( auto const* s = std::get_if<Strat>( &f.node ) )
  {
    std::string out = "<<";
    for ( std::size_t i = 0; i < s->coalition.size(); ++i )
      out += ( i ? "," : "" ) + g.agent_name( s->coalition[i] );
    return out + ">> " + render_goal( s->goal, g );
  }
  if ( auto const* inner = negated( f ) )
  {
    if ( is_top( *inner ) )
      return "false";
    if ( auto const* a = std::get_if<And>( &inner->node ) )
    {
      auto const* l = negated( *a->lhs );
      auto const* r = negated( *a->rhs );
      if ( l && r )
        return parens_if( level > 1, render_path( *l, g, 1 ) + " | " + render_path( *r, g, 2 ) );
      if ( r )
        return parens_if( level > 0, render_path( *a->lhs, g, 1 ) + " -> " + render_path( *r, g, 0 ) );
    }
    return "!" + render_path( *inner, g, 3 );
  }
  auto const& a = std::get<And>( f.node );
  return parens_if( level > 2, render_path( *a.lhs, g, 2 ) + " & " + render_path( *a.rhs, g, 3 ) );
}

} // namespace detail

/// Canonical concrete syntax. Parsing the result yields a structurally equal AST.
inline std::string render_formula( PathFormula const& f, GameStructure const& g ) { return detail::render_path( f, g, 0 ); }
inline std::string render_formula( PathPtr const& f, GameStructure const& g ) { return render_formula( *f, g ); }
inline std::string render_cap_formula( CapFormula const& f, GameStructure const& g ) { return detail::render_cap( f, g, 0 ); }

} // namespace upatl
