#pragma once

#include "error.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace upatl
{

/// Dense index into one of the finite sets of a game structure.
template<class Tag>
struct Id
{
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id( std::uint32_t v ) : value( v ) {}

  constexpr auto operator<=>( Id const& ) const = default;
};

struct AgentTag;
struct CapacityTag;
struct StateTag;
struct ActionTag;
struct PropTag;

/// Agents are numbered 1..k in diagnostics; `value` is the 0-based index.
using AgentId = Id<AgentTag>;
using CapacityId = Id<CapacityTag>;
using StateId = Id<StateTag>;
using ActionId = Id<ActionTag>;
using PropId = Id<PropTag>;

/// Reserved proposition that holds in every state. Backs the `true`/`false` literals.
inline constexpr PropId top_prop{ std::numeric_limits<std::uint32_t>::max() };

/// One action per agent, in agent-index order.
struct JointAction
{
  std::vector<ActionId> actions;

  JointAction() = default;
  explicit JointAction( std::vector<ActionId> acts ) : actions( std::move( acts ) ) {}

  ActionId operator[]( AgentId a ) const { return actions.at( a.value ); }
  std::size_t size() const { return actions.size(); }

  auto operator<=>( JointAction const& ) const = default;
};

namespace detail
{

template<class T>
void insert_sorted( std::vector<T>& v, T x )
{
  auto it = std::lower_bound( v.begin(), v.end(), x );
  if ( it == v.end() || *it != x )
    v.insert( it, x );
}

template<class T>
bool contains_sorted( std::vector<T> const& v, T x )
{
  return std::binary_search( v.begin(), v.end(), x );
}

class NameTable
{
public:
  std::uint32_t add( std::string name )
  {
    if ( index_.count( name ) )
      throw PreconditionError( "duplicate name '" + name + "'" );
    auto const id = static_cast<std::uint32_t>( names_.size() );
    index_.emplace( name, id );
    names_.push_back( std::move( name ) );
    return id;
  }

  std::optional<std::uint32_t> find( std::string_view name ) const
  {
    auto it = index_.find( std::string( name ) );
    if ( it == index_.end() )
      return std::nullopt;
    return it->second;
  }

  std::string const& at( std::uint32_t i ) const { return names_.at( i ); }
  std::size_t size() const { return names_.size(); }
  std::vector<std::string> const& names() const { return names_; }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

} // namespace detail

/// Unknown-profile game structure: a concurrent game structure whose agents
/// secretly hold one capacity each, restricting their usable actions.
///
/// The structure may be built in an invalid state; `validate_structure`
/// reports every broken invariant. Once validated it is treated as immutable.
class GameStructure
{
public:
  explicit GameStructure( std::string name = "game" ) : name_( std::move( name ) ) {}

  std::string const& name() const { return name_; }
  void set_name( std::string name ) { name_ = std::move( name ); }

  /* construction */

  AgentId add_agent( std::string name )
  {
    AgentId const a{ agents_.add( std::move( name ) ) };
    gamma_of_agent_.emplace_back();
    protocol_.emplace_back( states_.size() );
    return a;
  }

  CapacityId add_capacity( std::string name )
  {
    CapacityId const c{ capacities_.add( std::move( name ) ) };
    actions_of_capacity_.emplace_back();
    return c;
  }

  StateId add_state( std::string name )
  {
    StateId const q{ states_.add( std::move( name ) ) };
    labels_.emplace_back();
    for ( auto& row : protocol_ )
      row.emplace_back();
    return q;
  }

  PropId add_prop( std::string name ) { return PropId{ props_.add( std::move( name ) ) }; }
  ActionId add_action( std::string name ) { return ActionId{ actions_.add( std::move( name ) ) }; }

  void add_agent_capacity( AgentId a, CapacityId c )
  {
    check( a );
    check( c );
    detail::insert_sorted( gamma_of_agent_[a.value], c );
  }

  void add_capacity_action( CapacityId c, ActionId act )
  {
    check( c );
    check( act );
    detail::insert_sorted( actions_of_capacity_[c.value], act );
  }

  void set_protocol( AgentId a, StateId q, std::vector<ActionId> acts )
  {
    check( a );
    check( q );
    for ( auto act : acts )
      check( act );
    std::sort( acts.begin(), acts.end() );
    acts.erase( std::unique( acts.begin(), acts.end() ), acts.end() );
    protocol_[a.value][q.value] = std::move( acts );
  }

  void add_label( StateId q, PropId p )
  {
    check( q );
    check( p );
    detail::insert_sorted( labels_[q.value], p );
  }

  void clear_labels( StateId q )
  {
    check( q );
    labels_[q.value].clear();
  }

  void set_transition( StateId from, JointAction const& alpha, StateId to )
  {
    check( from );
    check( to );
    if ( alpha.size() != agent_count() )
      throw PreconditionError( "joint action has " + std::to_string( alpha.size() ) + " components, expected " +
                               std::to_string( agent_count() ) );
    for ( auto act : alpha.actions )
      check( act );
    transitions_[{ from, alpha }] = to;
  }

  bool remove_transition( StateId from, JointAction const& alpha ) { return transitions_.erase( { from, alpha } ) > 0; }

  void set_init( std::optional<StateId> q )
  {
    if ( q )
      check( *q );
    init_ = q;
  }

  /* sizes and names */

  std::size_t agent_count() const { return agents_.size(); }
  std::size_t capacity_count() const { return capacities_.size(); }
  std::size_t state_count() const { return states_.size(); }
  std::size_t prop_count() const { return props_.size(); }
  std::size_t action_count() const { return actions_.size(); }

  std::string const& agent_name( AgentId a ) const { return agents_.at( a.value ); }
  std::string const& capacity_name( CapacityId c ) const { return capacities_.at( c.value ); }
  std::string const& state_name( StateId q ) const { return states_.at( q.value ); }
  std::string const& action_name( ActionId act ) const { return actions_.at( act.value ); }
  std::string prop_name( PropId p ) const { return p == top_prop ? std::string( "true" ) : props_.at( p.value ); }

  std::optional<AgentId> find_agent( std::string_view n ) const { return wrap<AgentId>( agents_.find( n ) ); }
  std::optional<CapacityId> find_capacity( std::string_view n ) const { return wrap<CapacityId>( capacities_.find( n ) ); }
  std::optional<StateId> find_state( std::string_view n ) const { return wrap<StateId>( states_.find( n ) ); }
  std::optional<PropId> find_prop( std::string_view n ) const { return wrap<PropId>( props_.find( n ) ); }
  std::optional<ActionId> find_action( std::string_view n ) const { return wrap<ActionId>( actions_.find( n ) ); }

  std::vector<AgentId> agents() const { return iota<AgentId>( agent_count() ); }
  std::vector<StateId> states() const { return iota<StateId>( state_count() ); }
  std::vector<CapacityId> capacities() const { return iota<CapacityId>( capacity_count() ); }
  std::vector<PropId> props() const { return iota<PropId>( prop_count() ); }
  std::vector<ActionId> actions() const { return iota<ActionId>( action_count() ); }

  bool valid( AgentId a ) const { return a.value < agent_count(); }
  bool valid( CapacityId c ) const { return c.value < capacity_count(); }
  bool valid( StateId q ) const { return q.value < state_count(); }
  bool valid( ActionId act ) const { return act.value < action_count(); }
  bool valid( PropId p ) const { return p == top_prop || p.value < prop_count(); }

  /* the structure's maps */

  /// Capacities agent `a` may hold, sorted.
  std::vector<CapacityId> const& capacities_of( AgentId a ) const
  {
    check( a );
    return gamma_of_agent_[a.value];
  }

  /// Actions permitted by capacity `c`, sorted.
  std::vector<ActionId> const& actions_of( CapacityId c ) const
  {
    check( c );
    return actions_of_capacity_[c.value];
  }

  bool allows( CapacityId c, ActionId act ) const { return detail::contains_sorted( actions_of( c ), act ); }

  /// Actions available to `a` in `q`, sorted.
  std::vector<ActionId> const& protocol( AgentId a, StateId q ) const
  {
    check( a );
    check( q );
    return protocol_[a.value][q.value];
  }

  std::vector<PropId> const& labels( StateId q ) const
  {
    check( q );
    return labels_[q.value];
  }

  bool labeled( StateId q, PropId p ) const { return p == top_prop || detail::contains_sorted( labels( q ), p ); }

  std::optional<StateId> transition( StateId from, JointAction const& alpha ) const
  {
    auto it = transitions_.find( { from, alpha } );
    if ( it == transitions_.end() )
      return std::nullopt;
    return it->second;
  }

  std::map<std::pair<StateId, JointAction>, StateId> const& transitions() const { return transitions_; }

  std::optional<StateId> init() const { return init_; }

  void check( AgentId a ) const { require( valid( a ), "agent", a.value ); }
  void check( CapacityId c ) const { require( valid( c ), "capacity", c.value ); }
  void check( StateId q ) const { require( valid( q ), "state", q.value ); }
  void check( ActionId act ) const { require( valid( act ), "action", act.value ); }
  void check( PropId p ) const { require( valid( p ), "proposition", p.value ); }

private:
  template<class I>
  static std::optional<I> wrap( std::optional<std::uint32_t> v )
  {
    if ( !v )
      return std::nullopt;
    return I{ *v };
  }

  template<class I>
  static std::vector<I> iota( std::size_t n )
  {
    std::vector<I> out;
    out.reserve( n );
    for ( std::uint32_t i = 0; i < n; ++i )
      out.emplace_back( i );
    return out;
  }

  static void require( bool ok, char const* what, std::uint32_t index )
  {
    if ( !ok )
      throw UnknownIdError( std::string( "unknown " ) + what + " id " + std::to_string( index ) );
  }

  std::string name_;
  detail::NameTable agents_, capacities_, states_, props_, actions_;
  std::vector<std::vector<CapacityId>> gamma_of_agent_;
  std::vector<std::vector<ActionId>> actions_of_capacity_;
  std::vector<std::vector<std::vector<ActionId>>> protocol_; // [agent][state]
  std::vector<std::vector<PropId>> labels_;
  std::map<std::pair<StateId, JointAction>, StateId> transitions_;
  std::optional<StateId> init_;
};

/* validation */

enum class ViolationKind
{
  EmptyCapacitySet,          ///< Γ(a) = ∅
  ProtocolOutsideCapacities, ///< some action of d(a,q) is permitted by no capacity of a
  CapacityWithoutAction,     ///< d(a,q) ∩ γ(c) = ∅ for some c ∈ Γ(a)
  MissingTransition,         ///< o undefined on an available joint action
  SpuriousTransition         ///< o defined on a joint action that is not available
};

inline std::string_view to_string( ViolationKind k )
{
  switch ( k )
  {
  case ViolationKind::EmptyCapacitySet:
    return "empty-capacity-set";
  case ViolationKind::ProtocolOutsideCapacities:
    return "protocol-outside-capacities";
  case ViolationKind::CapacityWithoutAction:
    return "capacity-without-action";
  case ViolationKind::MissingTransition:
    return "missing-transition";
  default:
    return "spurious-transition";
  }
}

struct Violation
{
  ViolationKind kind;
  std::optional<AgentId> agent;
  std::optional<StateId> state;
  std::optional<CapacityId> capacity;
  std::optional<ActionId> action;
  std::optional<JointAction> joint_action;
  std::string message;
};

struct ValidationReport
{
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool has( ViolationKind k ) const
  {
    return std::any_of( violations.begin(), violations.end(), [k]( auto const& v ) { return v.kind == k; } );
  }
};

inline std::string render_joint_action( GameStructure const& g, JointAction const& alpha )
{
  std::string out = "(";
  for ( std::size_t i = 0; i < alpha.size(); ++i )
  {
    if ( i )
      out += ",";
    out += g.valid( alpha.actions[i] ) ? g.action_name( alpha.actions[i] ) : "#" + std::to_string( alpha.actions[i].value );
  }
  return out + ")";
}

namespace detail
{

/// Calls `fn` on every element of the product of `choices`, lexicographically
/// with the first component most significant. Stops early when `fn` returns false.
template<class T, class Fn>
bool for_each_product( std::vector<std::vector<T>> const& choices, Fn&& fn )
{
  for ( auto const& c : choices )
    if ( c.empty() )
      return true;
  std::vector<std::size_t> idx( choices.size(), 0 );
  std::vector<T> current( choices.size() );
  while ( true )
  {
    for ( std::size_t i = 0; i < choices.size(); ++i )
      current[i] = choices[i][idx[i]];
    if ( !fn( std::as_const( current ) ) )
      return false;
    std::size_t pos = choices.size();
    while ( pos > 0 )
    {
      --pos;
      if ( ++idx[pos] < choices[pos].size() )
        break;
      idx[pos] = 0;
      if ( pos == 0 )
        return true;
    }
    if ( choices.empty() )
      return true;
  }
}

} // namespace detail

/// Available joint actions in `q`: the product of all agents' protocols.
inline std::vector<JointAction> joint_actions( GameStructure const& g, StateId q )
{
  g.check( q );
  std::vector<std::vector<ActionId>> choices;
  for ( auto a : g.agents() )
    choices.push_back( g.protocol( a, q ) );
  std::vector<JointAction> out;
  detail::for_each_product( choices, [&]( std::vector<ActionId> const& acts ) {
    out.emplace_back( acts );
    return true;
  } );
  return out;
}

inline bool is_available( GameStructure const& g, StateId q, JointAction const& alpha )
{
  if ( !g.valid( q ) || alpha.size() != g.agent_count() )
    return false;
  for ( auto a : g.agents() )
    if ( !detail::contains_sorted( g.protocol( a, q ), alpha[a] ) )
      return false;
  return true;
}

/// o(q, alpha). Throws PreconditionError when alpha is not available in q and
/// MissingTransitionError when it is available but o is undefined.
inline StateId successor( GameStructure const& g, StateId q, JointAction const& alpha )
{
  g.check( q );
  if ( !is_available( g, q, alpha ) )
    throw PreconditionError( "joint action " + render_joint_action( g, alpha ) + " is not in the protocol at " +
                             g.state_name( q ) );
  auto next = g.transition( q, alpha );
  if ( !next )
    throw MissingTransitionError( "no transition for " + render_joint_action( g, alpha ) + " at " + g.state_name( q ) );
  return *next;
}

/// Reports every broken structural invariant, including the progression condition.
inline ValidationReport validate_structure( GameStructure const& g )
{
  ValidationReport report;
  auto add = [&]( Violation v ) { report.violations.push_back( std::move( v ) ); };

  for ( auto a : g.agents() )
  {
    auto const& caps = g.capacities_of( a );
    if ( caps.empty() )
    {
      add( { ViolationKind::EmptyCapacitySet, a, {}, {}, {}, {}, "Γ(" + g.agent_name( a ) + ")=∅" } );
      continue;
    }
    for ( auto q : g.states() )
    {
      auto const& d = g.protocol( a, q );
      for ( auto act : d )
      {
        bool const covered = std::any_of( caps.begin(), caps.end(), [&]( auto c ) { return g.allows( c, act ); } );
        if ( !covered )
          add( { ViolationKind::ProtocolOutsideCapacities, a, q, {}, act, {},
                 g.agent_name( a ) + ": " + g.action_name( act ) + "∈d at " + g.state_name( q ) +
                     " is outside every capacity" } );
      }
      for ( auto c : caps )
      {
        bool const meets = std::any_of( d.begin(), d.end(), [&]( auto act ) { return g.allows( c, act ); } );
        if ( !meets )
          add( { ViolationKind::CapacityWithoutAction, a, q, c, {}, {},
                 g.agent_name( a ) + ": d∩γ(" + g.capacity_name( c ) + ")=∅ at " + g.state_name( q ) } );
      }
    }
  }

  for ( auto q : g.states() )
    for ( auto const& alpha : joint_actions( g, q ) )
      if ( !g.transition( q, alpha ) )
        add( { ViolationKind::MissingTransition, {}, q, {}, {}, alpha,
               "o undefined for available joint action " + render_joint_action( g, alpha ) + " at " + g.state_name( q ) } );

  for ( auto const& [key, to] : g.transitions() )
    if ( !is_available( g, key.first, key.second ) )
      add( { ViolationKind::SpuriousTransition, {}, key.first, {}, {}, key.second,
             "o defined for unavailable joint action " + render_joint_action( g, key.second ) + " at " +
                 g.state_name( key.first ) } );

  return report;
}

/// Structural equality up to name-preserving reindexing of capacities,
/// states, actions and propositions. Agent order is significant.
inline bool isomorphic( GameStructure const& x, GameStructure const& y )
{
  if ( x.agent_count() != y.agent_count() || x.capacity_count() != y.capacity_count() ||
       x.state_count() != y.state_count() || x.prop_count() != y.prop_count() ||
       x.action_count() != y.action_count() || x.transitions().size() != y.transitions().size() )
    return false;

  auto map_agent = [&]( AgentId a ) -> std::optional<AgentId> { return y.find_agent( x.agent_name( a ) ); };
  auto map_cap = [&]( CapacityId c ) { return y.find_capacity( x.capacity_name( c ) ); };
  auto map_state = [&]( StateId q ) { return y.find_state( x.state_name( q ) ); };
  auto map_act = [&]( ActionId act ) { return y.find_action( x.action_name( act ) ); };
  auto map_prop = [&]( PropId p ) { return y.find_prop( x.prop_name( p ) ); };

  for ( auto a : x.agents() )
    if ( map_agent( a ) != a )
      return false;
  for ( auto c : x.capacities() )
    if ( !map_cap( c ) )
      return false;
  for ( auto q : x.states() )
    if ( !map_state( q ) )
      return false;
  for ( auto act : x.actions() )
    if ( !map_act( act ) )
      return false;
  for ( auto p : x.props() )
    if ( !map_prop( p ) )
      return false;

  auto sorted = []( auto v ) {
    std::sort( v.begin(), v.end() );
    return v;
  };

  for ( auto a : x.agents() )
  {
    std::vector<CapacityId> caps;
    for ( auto c : x.capacities_of( a ) )
      caps.push_back( *map_cap( c ) );
    if ( sorted( caps ) != y.capacities_of( a ) )
      return false;
    for ( auto q : x.states() )
    {
      std::vector<ActionId> acts;
      for ( auto act : x.protocol( a, q ) )
        acts.push_back( *map_act( act ) );
      if ( sorted( acts ) != y.protocol( a, *map_state( q ) ) )
        return false;
    }
  }
  for ( auto c : x.capacities() )
  {
    std::vector<ActionId> acts;
    for ( auto act : x.actions_of( c ) )
      acts.push_back( *map_act( act ) );
    if ( sorted( acts ) != y.actions_of( *map_cap( c ) ) )
      return false;
  }
  for ( auto q : x.states() )
  {
    std::vector<PropId> ps;
    for ( auto p : x.labels( q ) )
      ps.push_back( *map_prop( p ) );
    if ( sorted( ps ) != y.labels( *map_state( q ) ) )
      return false;
  }
  for ( auto const& [key, to] : x.transitions() )
  {
    JointAction alpha;
    for ( auto act : key.second.actions )
      alpha.actions.push_back( *map_act( act ) );
    if ( y.transition( *map_state( key.first ), alpha ) != map_state( to ) )
      return false;
  }
  return true;
}

} // namespace upatl

template<class Tag>
struct std::hash<upatl::Id<Tag>>
{
  std::size_t operator()( upatl::Id<Tag> id ) const noexcept { return std::hash<std::uint32_t>{}( id.value ); }
};
