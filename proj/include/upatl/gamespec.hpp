#pragma once

#include "model.hpp"

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace upatl
{

/*
 * Line-oriented game description:
 *
 *   game hand
 *   agents: obs, opp
 *   capacities:
 *     opp: lefty, righty
 *   actions:
 *     lefty: serve, swingL
 *   states: s0, s1
 *   init: s0
 *   labels:
 *     s0: start
 *   protocol:
 *     opp @ s0: serve, swingL
 *   transitions:
 *     s0 (watch, serve) -> s0
 *
 * `init` and `props` are optional. `props` declares propositions ahead of the labels,
 * including ones labeling no state. `#` starts a comment.
 */

struct NameRef
{
  std::string name;
  SourceSpan span;
};

struct CapacityDecl
{
  NameRef agent;
  std::vector<NameRef> capacities;
};

struct ActionDecl
{
  NameRef capacity;
  std::vector<NameRef> actions;
};

struct LabelDecl
{
  NameRef state;
  std::vector<NameRef> props;
};

struct ProtocolDecl
{
  NameRef agent;
  NameRef state;
  std::vector<NameRef> actions;
};

struct TransitionDecl
{
  NameRef from;
  std::vector<NameRef> actions;
  NameRef to;
};

struct GameDocument
{
  NameRef name;
  std::vector<NameRef> agents;
  std::vector<CapacityDecl> capacities;
  std::vector<ActionDecl> actions;
  std::vector<NameRef> states;
  std::optional<NameRef> init;
  std::vector<NameRef> props;
  std::vector<LabelDecl> labels;
  std::vector<ProtocolDecl> protocol;
  std::vector<TransitionDecl> transitions;
  std::map<std::string, SourceSpan> sections; ///< header position of each section present
};

namespace detail
{

inline constexpr std::array<std::string_view, 9> game_sections{ "agents", "capacities", "actions", "states", "init",
                                                                "props",  "labels",     "protocol", "transitions" };

inline bool is_section_keyword( std::string_view s )
{
  return std::find( game_sections.begin(), game_sections.end(), s ) != game_sections.end();
}

class GameLineLexer
{
public:
  struct Token
  {
    char kind; ///< 'i' identifier, 'a' arrow, otherwise the punctuation character
    std::string text;
    SourceSpan span;
  };

  static std::vector<Token> lex( std::string_view line, std::size_t line_no )
  {
    std::vector<Token> out;
    std::size_t pos = 0;
    while ( pos < line.size() )
    {
      char const c = line[pos];
      SourceSpan const span{ line_no, pos + 1 };
      if ( c == '#' )
        break;
      if ( std::isspace( static_cast<unsigned char>( c ) ) )
      {
        ++pos;
        continue;
      }
      if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
      {
        std::size_t const start = pos;
        while ( pos < line.size() && ( std::isalnum( static_cast<unsigned char>( line[pos] ) ) || line[pos] == '_' ) )
          ++pos;
        out.push_back( { 'i', std::string( line.substr( start, pos - start ) ), span } );
        continue;
      }
      if ( c == '-' && pos + 1 < line.size() && line[pos + 1] == '>' )
      {
        out.push_back( { 'a', "->", span } );
        pos += 2;
        continue;
      }
      if ( c == ':' || c == ',' || c == '@' || c == '(' || c == ')' )
      {
        out.push_back( { c, std::string( 1, c ), span } );
        ++pos;
        continue;
      }
      throw ParseError( std::string( "unexpected character '" ) + c + "'", span );
    }
    return out;
  }
};

class GameParser
{
  using Token = GameLineLexer::Token;

public:
  GameDocument parse( std::string_view text )
  {
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool saw_game = false;
    while ( start <= text.size() )
    {
      auto end = text.find( '\n', start );
      if ( end == std::string_view::npos )
        end = text.size();
      auto line = text.substr( start, end - start );
      if ( !line.empty() && line.back() == '\r' )
        line.remove_suffix( 1 );
      ++line_no;
      start = end + 1;
      toks_ = GameLineLexer::lex( line, line_no );
      at_ = 0;
      line_no_ = line_no;
      if ( toks_.empty() )
        continue;

      if ( toks_[0].kind == 'i' && toks_[0].text == "game" && !( toks_.size() > 1 && toks_[1].kind == ':' ) )
      {
        if ( saw_game )
          throw ParseError( "duplicate 'game' header", toks_[0].span );
        saw_game = true;
        ++at_;
        doc_.name = name( "game name" );
        end_of_line();
        section_.clear();
        continue;
      }
      if ( !saw_game )
        throw ParseError( "expected 'game <name>' header", toks_[0].span );

      if ( toks_.size() >= 2 && toks_[0].kind == 'i' && toks_[1].kind == ':' && is_section_keyword( toks_[0].text ) )
      {
        section_ = toks_[0].text;
        if ( doc_.sections.count( section_ ) )
          throw ParseError( "section '" + section_ + "' appears twice", toks_[0].span );
        doc_.sections[section_] = toks_[0].span;
        at_ = 2;
        if ( at_ < toks_.size() )
          inline_content( toks_[0].span );
        else if ( section_ == "init" )
          throw ParseError( "expected state name after 'init:'", toks_[1].span );
        continue;
      }
      entry();
    }
    if ( !saw_game )
      throw ParseError( "expected 'game <name>' header", SourceSpan{ line_no, 1 } );
    for ( auto required : { "agents", "capacities", "actions", "states", "labels", "protocol", "transitions" } )
      if ( !doc_.sections.count( required ) )
        throw ParseError( std::string( "missing section '" ) + required + ":'", SourceSpan{ line_no, 1 } );
    return std::move( doc_ );
  }

private:
  [[noreturn]] void fail( std::string const& msg ) const
  {
    SourceSpan span{ line_no_, 1 };
    if ( at_ < toks_.size() )
      span = toks_[at_].span;
    else if ( !toks_.empty() )
      span = SourceSpan{ line_no_, toks_.back().span.column + toks_.back().text.size() };
    throw ParseError( msg, span );
  }

  bool accept( char kind )
  {
    if ( at_ < toks_.size() && toks_[at_].kind == kind )
    {
      ++at_;
      return true;
    }
    return false;
  }

  void expect( char kind, char const* what )
  {
    if ( !accept( kind ) )
      fail( std::string( "expected " ) + what );
  }

  NameRef name( char const* what )
  {
    if ( at_ >= toks_.size() || toks_[at_].kind != 'i' )
      fail( std::string( "expected " ) + what );
    auto const& t = toks_[at_++];
    return { t.text, t.span };
  }

  void end_of_line()
  {
    if ( at_ < toks_.size() )
      fail( "unexpected '" + toks_[at_].text + "'" );
  }

  /// Comma-separated names up to the end of the line; may be empty.
  std::vector<NameRef> name_list( char const* what )
  {
    std::vector<NameRef> out;
    if ( at_ == toks_.size() )
      return out;
    out.push_back( name( what ) );
    while ( accept( ',' ) )
      out.push_back( name( what ) );
    end_of_line();
    return out;
  }

  void inline_content( SourceSpan header )
  {
    if ( section_ == "agents" )
      append( doc_.agents, name_list( "agent name" ) );
    else if ( section_ == "states" )
      append( doc_.states, name_list( "state name" ) );
    else if ( section_ == "props" )
      append( doc_.props, name_list( "proposition name" ) );
    else if ( section_ == "init" )
    {
      doc_.init = name( "state name" );
      end_of_line();
    }
    else
      throw ParseError( "section '" + section_ + ":' takes its entries on the following lines", header );
  }

  static void append( std::vector<NameRef>& to, std::vector<NameRef> from )
  {
    for ( auto& n : from )
      to.push_back( std::move( n ) );
  }

  void entry()
  {
    if ( section_.empty() )
      fail( "entry outside of any section" );
    if ( section_ == "agents" )
      append( doc_.agents, name_list( "agent name" ) );
    else if ( section_ == "states" )
      append( doc_.states, name_list( "state name" ) );
    else if ( section_ == "props" )
      append( doc_.props, name_list( "proposition name" ) );
    else if ( section_ == "init" )
      fail( "'init:' holds a single state" );
    else if ( section_ == "capacities" )
    {
      CapacityDecl d;
      d.agent = name( "agent name" );
      expect( ':', "':'" );
      d.capacities = name_list( "capacity name" );
      doc_.capacities.push_back( std::move( d ) );
    }
    else if ( section_ == "actions" )
    {
      ActionDecl d;
      d.capacity = name( "capacity name" );
      expect( ':', "':'" );
      d.actions = name_list( "action name" );
      doc_.actions.push_back( std::move( d ) );
    }
    else if ( section_ == "labels" )
    {
      LabelDecl d;
      d.state = name( "state name" );
      expect( ':', "':'" );
      d.props = name_list( "proposition name" );
      doc_.labels.push_back( std::move( d ) );
    }
    else if ( section_ == "protocol" )
    {
      ProtocolDecl d;
      d.agent = name( "agent name" );
      expect( '@', "'@'" );
      d.state = name( "state name" );
      expect( ':', "':'" );
      d.actions = name_list( "action name" );
      doc_.protocol.push_back( std::move( d ) );
    }
    else
    {
      TransitionDecl d;
      d.from = name( "state name" );
      expect( '(', "'('" );
      d.actions.push_back( name( "action name" ) );
      while ( accept( ',' ) )
        d.actions.push_back( name( "action name" ) );
      expect( ')', "')'" );
      expect( 'a', "'->'" );
      d.to = name( "state name" );
      end_of_line();
      doc_.transitions.push_back( std::move( d ) );
    }
  }

  GameDocument doc_;
  std::string section_;
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::size_t line_no_ = 0;
};

struct BoundGame
{
  GameStructure game;
  std::vector<Diagnostic> diagnostics; ///< name-resolution problems
  std::map<std::string, SourceSpan> agent_spans;
  std::map<std::pair<std::uint32_t, std::uint32_t>, SourceSpan> protocol_spans;      ///< (agent, state)
  std::map<std::pair<StateId, JointAction>, SourceSpan> transition_spans;
};

inline BoundGame resolve_game( GameDocument const& doc )
{
  BoundGame out;
  auto& g = out.game;
  auto& diags = out.diagnostics;
  g.set_name( doc.name.name );
  auto diag = [&]( SourceSpan span, std::string msg ) { diags.push_back( { span, std::move( msg ) } ); };

  for ( auto const& a : doc.agents )
  {
    if ( g.find_agent( a.name ) )
      diag( a.span, "duplicate agent '" + a.name + "'" );
    else
    {
      g.add_agent( a.name );
      out.agent_spans[a.name] = a.span;
    }
  }

  auto capacity = [&]( NameRef const& c ) {
    if ( auto id = g.find_capacity( c.name ) )
      return *id;
    return g.add_capacity( c.name );
  };
  for ( auto const& d : doc.capacities )
    for ( auto const& c : d.capacities )
      capacity( c );
  for ( auto const& d : doc.actions )
  {
    capacity( d.capacity );
    for ( auto const& act : d.actions )
      if ( !g.find_action( act.name ) )
        g.add_action( act.name );
  }

  std::set<std::string> seen;
  for ( auto const& d : doc.capacities )
  {
    auto a = g.find_agent( d.agent.name );
    if ( !a )
    {
      diag( d.agent.span, "unknown agent '" + d.agent.name + "'" );
      continue;
    }
    if ( !seen.insert( d.agent.name ).second )
      diag( d.agent.span, "duplicate capacities for agent '" + d.agent.name + "'" );
    for ( auto const& c : d.capacities )
      g.add_agent_capacity( *a, *g.find_capacity( c.name ) );
  }

  seen.clear();
  for ( auto const& d : doc.actions )
  {
    if ( !seen.insert( d.capacity.name ).second )
      diag( d.capacity.span, "duplicate actions for capacity '" + d.capacity.name + "'" );
    auto const c = *g.find_capacity( d.capacity.name );
    for ( auto const& act : d.actions )
      g.add_capacity_action( c, *g.find_action( act.name ) );
  }

  for ( auto const& q : doc.states )
  {
    if ( g.find_state( q.name ) )
      diag( q.span, "duplicate state '" + q.name + "'" );
    else
      g.add_state( q.name );
  }

  auto state = [&]( NameRef const& q ) -> std::optional<StateId> {
    auto id = g.find_state( q.name );
    if ( !id )
      diag( q.span, "unknown state '" + q.name + "'" );
    return id;
  };
  auto action = [&]( NameRef const& act ) -> std::optional<ActionId> {
    auto id = g.find_action( act.name );
    if ( !id )
      diag( act.span, "unknown action '" + act.name + "'" );
    return id;
  };
  auto prop = [&]( NameRef const& p ) -> std::optional<PropId> {
    if ( p.name == "true" || p.name == "false" )
    {
      diag( p.span, "'" + p.name + "' is reserved and cannot name a proposition" );
      return std::nullopt;
    }
    if ( auto id = g.find_prop( p.name ) )
      return id;
    return g.add_prop( p.name );
  };

  if ( doc.init )
    if ( auto q = state( *doc.init ) )
      g.set_init( *q );

  for ( auto const& p : doc.props )
  {
    if ( g.find_prop( p.name ) )
      diag( p.span, "duplicate proposition '" + p.name + "'" );
    else
      prop( p );
  }

  seen.clear();
  for ( auto const& d : doc.labels )
  {
    auto q = state( d.state );
    if ( q && !seen.insert( d.state.name ).second )
      diag( d.state.span, "duplicate labels for state '" + d.state.name + "'" );
    for ( auto const& p : d.props )
      if ( auto id = prop( p ); id && q )
        g.add_label( *q, *id );
  }

  for ( auto const& d : doc.protocol )
  {
    auto a = g.find_agent( d.agent.name );
    if ( !a )
      diag( d.agent.span, "unknown agent '" + d.agent.name + "'" );
    auto q = state( d.state );
    std::vector<ActionId> acts;
    bool ok = true;
    for ( auto const& act : d.actions )
    {
      auto id = action( act );
      ok = ok && id.has_value();
      if ( id )
        acts.push_back( *id );
    }
    if ( !a || !q || !ok )
      continue;
    auto const key = std::make_pair( a->value, q->value );
    if ( out.protocol_spans.count( key ) )
    {
      diag( d.agent.span, "duplicate protocol for " + d.agent.name + " @ " + d.state.name );
      continue;
    }
    out.protocol_spans[key] = d.agent.span;
    g.set_protocol( *a, *q, std::move( acts ) );
  }

  for ( auto const& d : doc.transitions )
  {
    auto from = state( d.from );
    auto to = state( d.to );
    JointAction alpha;
    bool ok = true;
    for ( auto const& act : d.actions )
    {
      auto id = action( act );
      ok = ok && id.has_value();
      if ( id )
        alpha.actions.push_back( *id );
    }
    if ( ok && alpha.size() != g.agent_count() )
    {
      diag( d.from.span, "joint action has " + std::to_string( alpha.size() ) + " components, expected " +
                             std::to_string( g.agent_count() ) );
      ok = false;
    }
    if ( !from || !to || !ok )
      continue;
    if ( g.transition( *from, alpha ) )
    {
      diag( d.from.span, "duplicate transition for " + d.from.name + " " + render_joint_action( g, alpha ) );
      continue;
    }
    out.transition_spans[{ *from, alpha }] = d.from.span;
    g.set_transition( *from, alpha, *to );
  }
  return out;
}

} // namespace detail

inline GameDocument parse_game( std::string_view text ) { return detail::GameParser().parse( text ); }

/// Resolves every name and validates the result. Throws BindError carrying
/// one span-annotated diagnostic per problem.
inline GameStructure bind_game( GameDocument const& doc )
{
  auto bound = detail::resolve_game( doc );
  auto diags = std::move( bound.diagnostics );
  if ( diags.empty() )
  {
    auto const& g = bound.game;
    auto section = [&]( char const* s ) {
      auto it = doc.sections.find( s );
      return it == doc.sections.end() ? SourceSpan{ 1, 1 } : it->second;
    };
    for ( auto const& v : validate_structure( g ).violations )
    {
      SourceSpan span = section( "protocol" );
      switch ( v.kind )
      {
      case ViolationKind::EmptyCapacitySet:
        span = bound.agent_spans.at( g.agent_name( *v.agent ) );
        break;
      case ViolationKind::ProtocolOutsideCapacities:
      case ViolationKind::CapacityWithoutAction:
        if ( auto it = bound.protocol_spans.find( { v.agent->value, v.state->value } ); it != bound.protocol_spans.end() )
          span = it->second;
        break;
      case ViolationKind::MissingTransition:
        span = section( "transitions" );
        break;
      case ViolationKind::SpuriousTransition:
        span = bound.transition_spans.at( { *v.state, *v.joint_action } );
        break;
      }
      diags.push_back( { span, v.message } );
    }
  }
  if ( !diags.empty() )
    throw BindError( std::move( diags ) );
  return std::move( bound.game );
}

inline GameStructure load_game( std::string_view text ) { return bind_game( parse_game( text ) ); }

/// Canonical text form of a structure.
inline std::string render_game( GameStructure const& g )
{
  std::ostringstream os;
  auto list = [&]( auto const& ids, auto&& name_of ) {
    std::string out;
    for ( auto const& id : ids )
      out += ( out.empty() ? "" : ", " ) + name_of( id );
    return out;
  };
  auto agent_name = [&]( AgentId a ) { return g.agent_name( a ); };
  auto cap_name = [&]( CapacityId c ) { return g.capacity_name( c ); };
  auto state_name = [&]( StateId q ) { return g.state_name( q ); };
  auto action_name = [&]( ActionId act ) { return g.action_name( act ); };
  auto prop_name = [&]( PropId p ) { return g.prop_name( p ); };

  os << "game " << g.name() << "\n";
  os << "agents: " << list( g.agents(), agent_name ) << "\n";
  os << "capacities:\n";
  for ( auto a : g.agents() )
    os << "  " << g.agent_name( a ) << ": " << list( g.capacities_of( a ), cap_name ) << "\n";
  os << "actions:\n";
  for ( auto c : g.capacities() )
    os << "  " << g.capacity_name( c ) << ": " << list( g.actions_of( c ), action_name ) << "\n";
  os << "states: " << list( g.states(), state_name ) << "\n";
  if ( g.init() )
    os << "init: " << g.state_name( *g.init() ) << "\n";

  std::vector<PropId> declared;
  for ( auto p : g.props() )
  {
    bool used = false;
    for ( auto q : g.states() )
      used = used || g.labeled( q, p );
    if ( !used )
      declared.push_back( p );
  }
  auto bound = declared;
  for ( auto q : g.states() )
    for ( auto p : g.labels( q ) )
      if ( std::find( bound.begin(), bound.end(), p ) == bound.end() )
        bound.push_back( p );
  if ( bound != g.props() )
    declared = g.props();
  if ( !declared.empty() )
    os << "props: " << list( declared, prop_name ) << "\n";

  os << "labels:\n";
  for ( auto q : g.states() )
    os << "  " << g.state_name( q ) << ":" << ( g.labels( q ).empty() ? "" : " " ) << list( g.labels( q ), prop_name ) << "\n";
  os << "protocol:\n";
  for ( auto a : g.agents() )
    for ( auto q : g.states() )
      os << "  " << g.agent_name( a ) << " @ " << g.state_name( q ) << ": " << list( g.protocol( a, q ), action_name ) << "\n";
  os << "transitions:\n";
  for ( auto const& [key, to] : g.transitions() )
    os << "  " << g.state_name( key.first ) << " " << render_joint_action( g, key.second ) << " -> " << g.state_name( to )
       << "\n";
  return os.str();
}

} // namespace upatl
