#pragma once

#include "model.hpp"

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace upatl
{

/// Finite path q1 -a1-> q2 -a2-> ... qn. Always ends with a state.
struct Path
{
  std::vector<StateId> states;
  std::vector<JointAction> actions;

  Path() = default;
  explicit Path( StateId q ) : states{ q } {}

  std::size_t length() const { return states.size(); }
  StateId last() const { return states.back(); }

  /// Prefix holding the first `n` states (paper position 2n-1).
  Path prefix( std::size_t n ) const
  {
    if ( n == 0 || n > states.size() )
      throw PreconditionError( "prefix of " + std::to_string( n ) + " states from a path of " +
                               std::to_string( states.size() ) );
    Path p;
    p.states.assign( states.begin(), states.begin() + static_cast<std::ptrdiff_t>( n ) );
    p.actions.assign( actions.begin(), actions.begin() + static_cast<std::ptrdiff_t>( n - 1 ) );
    return p;
  }

  Path extended( JointAction alpha, StateId q ) const
  {
    Path p = *this;
    p.actions.push_back( std::move( alpha ) );
    p.states.push_back( q );
    return p;
  }

  auto operator<=>( Path const& ) const = default;
};

/// Finite state trace.
using History = std::vector<StateId>;

inline History state_trace( Path const& rho ) { return rho.states; }
inline std::vector<JointAction> action_trace( Path const& rho ) { return rho.actions; }

/// True iff every step is an available joint action leading to the recorded state.
inline bool validate_path( GameStructure const& g, Path const& rho )
{
  if ( rho.states.empty() || rho.actions.size() + 1 != rho.states.size() )
    return false;
  for ( auto q : rho.states )
    if ( !g.valid( q ) )
      return false;
  for ( std::size_t i = 0; i < rho.actions.size(); ++i )
  {
    if ( !is_available( g, rho.states[i], rho.actions[i] ) )
      return false;
    if ( g.transition( rho.states[i], rho.actions[i] ) != rho.states[i + 1] )
      return false;
  }
  return true;
}

/// Partial map from agents to capacities; `complete` when every agent is assigned.
struct CapacityAssignment
{
  std::vector<std::optional<CapacityId>> caps;

  CapacityAssignment() = default;
  explicit CapacityAssignment( std::size_t agents ) : caps( agents ) {}
  explicit CapacityAssignment( std::vector<std::optional<CapacityId>> c ) : caps( std::move( c ) ) {}

  std::optional<CapacityId> operator[]( AgentId a ) const { return caps.at( a.value ); }
  void assign( AgentId a, CapacityId c ) { caps.at( a.value ) = c; }

  bool complete() const
  {
    return std::all_of( caps.begin(), caps.end(), []( auto const& c ) { return c.has_value(); } );
  }

  auto operator<=>( CapacityAssignment const& ) const = default;
};

using AssignmentSet = std::set<CapacityAssignment>;

inline bool respects_capacities( GameStructure const& g, CapacityAssignment const& lambda )
{
  if ( lambda.caps.size() != g.agent_count() )
    return false;
  for ( auto a : g.agents() )
    if ( auto c = lambda[a]; c && !detail::contains_sorted( g.capacities_of( a ), *c ) )
      return false;
  return true;
}

/// Every complete, Γ-respecting capacity assignment.
inline AssignmentSet complete_assignments( GameStructure const& g )
{
  std::vector<std::vector<CapacityId>> choices;
  for ( auto a : g.agents() )
    choices.push_back( g.capacities_of( a ) );
  AssignmentSet out;
  detail::for_each_product( choices, [&]( std::vector<CapacityId> const& pick ) {
    CapacityAssignment lambda( g.agent_count() );
    for ( std::size_t i = 0; i < pick.size(); ++i )
      lambda.caps[i] = pick[i];
    out.insert( std::move( lambda ) );
    return true;
  } );
  return out;
}

/// Capacities of each agent consistent with that agent's own actions along `rho`.
inline std::vector<std::vector<CapacityId>> compatible_capacities( GameStructure const& g, Path const& rho )
{
  std::vector<std::vector<CapacityId>> out;
  for ( auto a : g.agents() )
  {
    std::vector<CapacityId> caps;
    for ( auto c : g.capacities_of( a ) )
    {
      bool const ok = std::all_of( rho.actions.begin(), rho.actions.end(),
                                   [&]( JointAction const& alpha ) { return g.allows( c, alpha[a] ); } );
      if ( ok )
        caps.push_back( c );
    }
    out.push_back( std::move( caps ) );
  }
  return out;
}

inline bool has_compatible_assignment( GameStructure const& g, Path const& rho )
{
  auto const caps = compatible_capacities( g, rho );
  return std::none_of( caps.begin(), caps.end(), []( auto const& c ) { return c.empty(); } );
}

/// The complete assignments that may bring about `rho`. The constraint is
/// per agent, so the result is the product of each agent's compatible capacities.
inline AssignmentSet compatible_assignments( GameStructure const& g, Path const& rho )
{
  AssignmentSet out;
  detail::for_each_product( compatible_capacities( g, rho ), [&]( std::vector<CapacityId> const& pick ) {
    CapacityAssignment lambda( g.agent_count() );
    for ( std::size_t i = 0; i < pick.size(); ++i )
      lambda.caps[i] = pick[i];
    out.insert( std::move( lambda ) );
    return true;
  } );
  return out;
}

/// rho ~_a rho': same state trace and the same own actions for `a` at every step.
/// Paths of different lengths cannot be compared and raise PreconditionError.
inline bool indistinguishable( GameStructure const& g, Path const& rho, Path const& other, AgentId a )
{
  g.check( a );
  if ( rho.length() != other.length() )
    throw PreconditionError( "indistinguishability compares paths of equal length" );
  if ( rho.states != other.states )
    return false;
  for ( std::size_t i = 0; i < rho.actions.size(); ++i )
    if ( rho.actions[i][a] != other.actions[i][a] )
      return false;
  return true;
}

/// All valid paths `a` cannot tell apart from `rho`, including `rho` itself.
inline std::vector<Path> indistinguishability_class( GameStructure const& g, Path const& rho, AgentId a )
{
  g.check( a );
  if ( !validate_path( g, rho ) )
    throw PreconditionError( "indistinguishability class of an invalid path" );

  std::vector<std::vector<JointAction>> steps;
  for ( std::size_t i = 0; i < rho.actions.size(); ++i )
  {
    std::vector<JointAction> alts;
    for ( auto const& alpha : joint_actions( g, rho.states[i] ) )
      if ( alpha[a] == rho.actions[i][a] && g.transition( rho.states[i], alpha ) == rho.states[i + 1] )
        alts.push_back( alpha );
    steps.push_back( std::move( alts ) );
  }

  std::vector<Path> out;
  detail::for_each_product( steps, [&]( std::vector<JointAction> const& acts ) {
    Path p;
    p.states = rho.states;
    p.actions = acts;
    out.push_back( std::move( p ) );
    return true;
  } );
  return out;
}

/// Finite decision tree standing for a memoryful strategy assignment of a
/// coalition. Decisions are keyed by the state history since `pivot`
/// (pivot first); each entry lists one action per coalition agent, in
/// `coalition` order.
struct StrategyTree
{
  std::vector<AgentId> coalition;
  StateId pivot;
  std::size_t depth = 0;
  std::map<History, std::vector<ActionId>> decisions;

  std::vector<ActionId> const* decision( History const& h ) const
  {
    auto it = decisions.find( h );
    return it == decisions.end() ? nullptr : &it->second;
  }

  bool operator==( StrategyTree const& ) const = default;
};

/// Every prescribed action is in the protocol of its agent at the history's last state.
inline bool validate_strategy( GameStructure const& g, StrategyTree const& sigma )
{
  if ( !std::is_sorted( sigma.coalition.begin(), sigma.coalition.end() ) )
    return false;
  for ( auto a : sigma.coalition )
    if ( !g.valid( a ) )
      return false;
  for ( auto const& [h, acts] : sigma.decisions )
  {
    if ( h.empty() || h.size() > sigma.depth || h.front() != sigma.pivot || acts.size() != sigma.coalition.size() )
      return false;
    for ( std::size_t i = 0; i < acts.size(); ++i )
      if ( !detail::contains_sorted( g.protocol( sigma.coalition[i], h.back() ), acts[i] ) )
        return false;
  }
  return true;
}

/// Extensions of `rho` by exactly `k` steps in which the coalition follows
/// `sigma` on the history since the pivot, the other agents move freely, and
/// some complete capacity assignment stays compatible with every prefix.
inline std::vector<Path> outcomes_bounded( GameStructure const& g, Path const& rho, StrategyTree const& sigma, std::size_t k )
{
  if ( rho.states.empty() || sigma.pivot != rho.last() )
    throw StrategyError( "strategy pivot does not match the last state of the path" );
  if ( sigma.depth < k )
    throw StrategyError( "strategy tree of depth " + std::to_string( sigma.depth ) + " cannot drive " +
                         std::to_string( k ) + " steps" );
  if ( !has_compatible_assignment( g, rho ) )
    throw PreconditionError( "outcomes requested from a path with no compatible capacity assignment" );

  std::vector<bool> in_coalition( g.agent_count(), false );
  for ( auto a : sigma.coalition )
    in_coalition.at( a.value ) = true;

  std::size_t const pivot_index = rho.length() - 1;
  std::vector<Path> frontier{ rho };
  for ( std::size_t step = 0; step < k; ++step )
  {
    std::vector<Path> next;
    for ( auto const& p : frontier )
    {
      History const h( p.states.begin() + static_cast<std::ptrdiff_t>( pivot_index ), p.states.end() );
      auto const* prescribed = sigma.decision( h );
      if ( !sigma.coalition.empty() && !prescribed )
        throw StrategyError( "strategy tree has no decision for a reachable history" );

      std::vector<std::vector<ActionId>> choices;
      std::size_t member = 0;
      for ( auto a : g.agents() )
      {
        if ( in_coalition[a.value] )
          choices.push_back( { ( *prescribed )[member++] } );
        else
          choices.push_back( g.protocol( a, p.last() ) );
      }
      detail::for_each_product( choices, [&]( std::vector<ActionId> const& acts ) {
        JointAction alpha( acts );
        Path ext = p.extended( alpha, successor( g, p.last(), alpha ) );
        if ( has_compatible_assignment( g, ext ) )
          next.push_back( std::move( ext ) );
        return true;
      } );
    }
    frontier = std::move( next );
  }
  std::sort( frontier.begin(), frontier.end() );
  return frontier;
}

/* textual paths: "s0 (watch,swingL) s1" */

inline std::string render_path( GameStructure const& g, Path const& rho )
{
  std::string out;
  for ( std::size_t i = 0; i < rho.states.size(); ++i )
  {
    if ( i )
      out += " " + render_joint_action( g, rho.actions[i - 1] ) + " ";
    out += g.state_name( rho.states[i] );
  }
  return out;
}

inline std::string render_assignment( GameStructure const& g, CapacityAssignment const& lambda )
{
  std::string out;
  for ( auto a : g.agents() )
  {
    if ( !out.empty() )
      out += " ";
    out += g.agent_name( a ) + "=" + ( lambda[a] ? g.capacity_name( *lambda[a] ) : std::string( "?" ) );
  }
  return out;
}

/// Parses alternating states and parenthesized joint actions. The result is
/// checked against the structure's transitions.
inline Path parse_path( GameStructure const& g, std::string_view text )
{
  std::size_t pos = 0;
  auto span = [&]() { return SourceSpan{ 1, pos + 1 }; };
  auto skip_ws = [&]() {
    while ( pos < text.size() && std::isspace( static_cast<unsigned char>( text[pos] ) ) )
      ++pos;
  };
  auto ident = [&]() {
    skip_ws();
    std::size_t const start = pos;
    while ( pos < text.size() && ( std::isalnum( static_cast<unsigned char>( text[pos] ) ) || text[pos] == '_' ) )
      ++pos;
    if ( start == pos )
      throw ParseError( "expected identifier", SourceSpan{ 1, start + 1 } );
    return std::string( text.substr( start, pos - start ) );
  };
  auto state = [&]() {
    auto const at = span();
    auto const name = ident();
    auto q = g.find_state( name );
    if ( !q )
      throw ParseError( "unknown state '" + name + "'", at );
    return *q;
  };

  Path rho( state() );
  while ( true )
  {
    skip_ws();
    if ( pos == text.size() )
      break;
    if ( text[pos] != '(' )
      throw ParseError( "expected '(' or end of path", span() );
    auto const step_span = span();
    ++pos;
    JointAction alpha;
    while ( true )
    {
      auto const at = span();
      auto const name = ident();
      auto act = g.find_action( name );
      if ( !act )
        throw ParseError( "unknown action '" + name + "'", at );
      alpha.actions.push_back( *act );
      skip_ws();
      if ( pos < text.size() && text[pos] == ',' )
      {
        ++pos;
        continue;
      }
      if ( pos < text.size() && text[pos] == ')' )
      {
        ++pos;
        break;
      }
      throw ParseError( "expected ',' or ')'", span() );
    }
    if ( alpha.size() != g.agent_count() )
      throw ParseError( "joint action needs " + std::to_string( g.agent_count() ) + " components", step_span );
    auto const from = rho.last();
    auto const to = state();
    if ( !is_available( g, from, alpha ) )
      throw ParseError( "joint action " + render_joint_action( g, alpha ) + " is not available at " + g.state_name( from ),
                        step_span );
    if ( g.transition( from, alpha ) != to )
      throw ParseError( render_joint_action( g, alpha ) + " does not lead from " + g.state_name( from ) + " to " +
                            g.state_name( to ),
                        step_span );
    rho = rho.extended( std::move( alpha ), to );
  }
  return rho;
}

} // namespace upatl
