#pragma once

// Naive reference implementations. Nothing here calls into trace or checker:
// paths, assignments, classes, strategies and outcomes are rebuilt from the
// raw structure accessors, trading speed for a direct reading of the
// definitions.

#include "formula.hpp"
#include "trace.hpp"
#include "verdict.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace upatl
{

namespace oracle_detail
{

using Assignment = std::vector<CapacityId>;
using Tuple = std::vector<ActionId>;

struct Run
{
  std::vector<StateId> states;
  std::vector<Tuple> moves;
};

inline Verdict k_not( Verdict v )
{
  if ( v == Verdict::True )
    return Verdict::False;
  if ( v == Verdict::False )
    return Verdict::True;
  return Verdict::Unknown;
}

inline Verdict k_and( Verdict x, Verdict y )
{
  if ( x == Verdict::False || y == Verdict::False )
    return Verdict::False;
  if ( x == Verdict::True && y == Verdict::True )
    return Verdict::True;
  return Verdict::Unknown;
}

inline Verdict k_or( Verdict x, Verdict y ) { return k_not( k_and( k_not( x ), k_not( y ) ) ); }

inline Verdict k_all( std::vector<Verdict> const& vs )
{
  Verdict r = Verdict::True;
  for ( auto v : vs )
    r = k_and( r, v );
  return r;
}

inline Verdict k_any( std::vector<Verdict> const& vs )
{
  Verdict r = Verdict::False;
  for ( auto v : vs )
    r = k_or( r, v );
  return r;
}

/// Every tuple picking one element from each list, first list most significant.
template<class T>
std::vector<std::vector<T>> product( std::vector<std::vector<T>> const& lists )
{
  std::vector<std::vector<T>> out{ {} };
  for ( auto const& list : lists )
  {
    std::vector<std::vector<T>> next;
    for ( auto const& prefix : out )
      for ( auto const& x : list )
      {
        auto t = prefix;
        t.push_back( x );
        next.push_back( std::move( t ) );
      }
    out = std::move( next );
  }
  return out;
}

class Oracle
{
public:
  Oracle( GameStructure const& g, std::size_t k, std::size_t tree_limit ) : g_( g ), k_( k ), tree_limit_( tree_limit ) {}

  /// Satisfaction at 1-based position i of a finite run.
  Verdict sat( Run const& r, std::size_t i, PathFormula const& f )
  {
    if ( auto p = std::get_if<Atom>( &f.node ) )
    {
      auto q = r.states[i - 1];
      if ( p->prop == top_prop )
        return Verdict::True;
      auto const& ls = g_.labels( q );
      return std::find( ls.begin(), ls.end(), p->prop ) != ls.end() ? Verdict::True : Verdict::False;
    }
    if ( auto p = std::get_if<Know>( &f.node ) )
      return knows( cut( r, i ), p->agent, *p->arg ) ? Verdict::True : Verdict::False;
    if ( auto p = std::get_if<Not>( &f.node ) )
      return k_not( sat( r, i, *p->arg ) );
    if ( auto p = std::get_if<And>( &f.node ) )
      return k_and( sat( r, i, *p->lhs ), sat( r, i, *p->rhs ) );
    auto const& s = std::get<Strat>( f.node );
    return strategic( cut( r, i ), s.coalition, s.goal );
  }

  static Run cut( Run const& r, std::size_t i )
  {
    Run out;
    out.states.assign( r.states.begin(), r.states.begin() + static_cast<std::ptrdiff_t>( i ) );
    out.moves.assign( r.moves.begin(), r.moves.begin() + static_cast<std::ptrdiff_t>( i - 1 ) );
    return out;
  }

  /// All complete assignments over Γ.
  std::vector<Assignment> all_assignments() const
  {
    std::vector<std::vector<CapacityId>> lists;
    for ( std::uint32_t a = 0; a < g_.agent_count(); ++a )
      lists.push_back( g_.capacities_of( AgentId{ a } ) );
    return product( lists );
  }

  bool permits( CapacityId c, ActionId act ) const
  {
    auto const& acts = g_.actions_of( c );
    return std::find( acts.begin(), acts.end(), act ) != acts.end();
  }

  /// F(run): assignments under which every action taken is permitted.
  std::set<Assignment> compatible( Run const& r ) const
  {
    std::set<Assignment> out;
    for ( auto const& lam : all_assignments() )
    {
      bool ok = true;
      for ( auto const& t : r.moves )
        for ( std::size_t a = 0; a < t.size(); ++a )
          ok = ok && permits( lam[a], t[a] );
      if ( ok )
        out.insert( lam );
    }
    return out;
  }

  /// Tuples of actions available at q (any action name, filtered by protocol).
  std::vector<Tuple> available( StateId q ) const
  {
    std::vector<std::vector<ActionId>> lists;
    for ( std::uint32_t a = 0; a < g_.agent_count(); ++a )
    {
      std::vector<ActionId> acts;
      auto const& d = g_.protocol( AgentId{ a }, q );
      for ( std::uint32_t x = 0; x < g_.action_count(); ++x )
        if ( std::find( d.begin(), d.end(), ActionId{ x } ) != d.end() )
          acts.push_back( ActionId{ x } );
      lists.push_back( acts );
    }
    return product( lists );
  }

  StateId step( StateId q, Tuple const& t ) const
  {
    auto to = g_.transition( q, JointAction{ t } );
    if ( !to )
      throw PreconditionError( "oracle: missing transition" );
    return *to;
  }

  static bool eval_cap( Assignment const& lam, CapFormula const& f )
  {
    if ( auto p = std::get_if<HasCap>( &f.node ) )
      return lam[p->agent.value] == p->capacity;
    if ( auto p = std::get_if<CapNot>( &f.node ) )
      return !eval_cap( lam, *p->arg );
    auto const& n = std::get<CapAnd>( f.node );
    return eval_cap( lam, *n.lhs ) && eval_cap( lam, *n.rhs );
  }

  /// Every run with the same states as r whose moves agree with r on agent a.
  std::vector<Run> indistinguishable_runs( Run const& r, AgentId a ) const
  {
    std::vector<Run> out{ Run{ { r.states.front() }, {} } };
    for ( std::size_t t = 0; t < r.moves.size(); ++t )
    {
      std::vector<Run> next;
      for ( auto const& run : out )
        for ( auto const& tup : available( r.states[t] ) )
          if ( tup[a.value] == r.moves[t][a.value] && step( r.states[t], tup ) == r.states[t + 1] )
          {
            auto ext = run;
            ext.moves.push_back( tup );
            ext.states.push_back( r.states[t + 1] );
            next.push_back( std::move( ext ) );
          }
      out = std::move( next );
    }
    return out;
  }

  bool knows( Run const& r, AgentId a, CapFormula const& phi ) const
  {
    for ( auto const& other : indistinguishable_runs( r, a ) )
      for ( auto const& lam : compatible( other ) )
        if ( !eval_cap( lam, phi ) )
          return false;
    return true;
  }

  /// Verdict of a temporal goal on a run whose window starts at `start`.
  Verdict temporal( TemporalFormula const& goal, Run const& r, std::size_t start )
  {
    std::size_t const end = r.states.size();
    if ( auto p = std::get_if<Next>( &goal.node ) )
      return start + 1 <= end ? sat( r, start + 1, *p->arg ) : Verdict::Unknown;
    if ( auto p = std::get_if<Until>( &goal.node ) )
    {
      // OR over witnesses j1, plus the inconclusive case of lhs holding throughout
      std::vector<Verdict> options;
      for ( std::size_t j1 = start; j1 <= end; ++j1 )
      {
        std::vector<Verdict> parts{ sat( r, j1, *p->rhs ) };
        for ( std::size_t j2 = start; j2 < j1; ++j2 )
          parts.push_back( sat( r, j2, *p->lhs ) );
        options.push_back( k_all( parts ) );
      }
      std::vector<Verdict> open{ Verdict::Unknown };
      for ( std::size_t j = start; j <= end; ++j )
        open.push_back( sat( r, j, *p->lhs ) );
      options.push_back( k_all( open ) );
      return k_any( options );
    }
    auto const& rel = std::get<Release>( goal.node );
    // AND over positions j: rhs holds at j or lhs released it earlier; and either
    // a release happens or the horizon leaves it open
    std::vector<Verdict> duties;
    for ( std::size_t j = start; j <= end; ++j )
    {
      std::vector<Verdict> excuses{ sat( r, j, *rel.rhs ) };
      for ( std::size_t j2 = start; j2 < j; ++j2 )
        excuses.push_back( sat( r, j2, *rel.lhs ) );
      duties.push_back( k_any( excuses ) );
    }
    std::vector<Verdict> closure{ Verdict::Unknown };
    for ( std::size_t j = start; j <= end; ++j )
      closure.push_back( sat( r, j, *rel.lhs ) );
    duties.push_back( k_any( closure ) );
    return k_all( duties );
  }

  /// Enumerates every strategy of Y over suffix histories of length <= k,
  /// restricted to histories some compatible outcome prefix reaches, and
  /// hands each strategy's outcome set to fn.
  template<class Fn>
  void strategies( Run const& prefix, std::vector<AgentId> const& coalition, Fn&& fn )
  {
    struct Pending
    {
      std::vector<StateId> history;
      std::vector<Run> runs;
    };
    std::size_t count = 0;
    std::vector<Run> done;

    std::function<void( std::vector<Pending> )> rec = [&]( std::vector<Pending> queue ) {
      if ( queue.empty() )
      {
        if ( ++count > tree_limit_ )
          throw ResourceLimitError( "oracle: more than " + std::to_string( tree_limit_ ) + " strategies" );
        fn( done );
        return;
      }
      auto node = queue.front();
      queue.erase( queue.begin() );
      StateId const q = node.history.back();

      std::vector<std::vector<ActionId>> lists;
      for ( auto a : coalition )
        lists.push_back( g_.protocol( a, q ) );
      for ( auto const& choice : product( lists ) )
      {
        std::map<StateId, std::vector<Run>> children;
        for ( auto const& run : node.runs )
          for ( auto const& tup : available( q ) )
          {
            bool follows = true;
            for ( std::size_t y = 0; y < coalition.size(); ++y )
              follows = follows && tup[coalition[y].value] == choice[y];
            if ( !follows )
              continue;
            auto ext = run;
            ext.moves.push_back( tup );
            ext.states.push_back( step( q, tup ) );
            if ( !compatible( ext ).empty() )
              children[ext.states.back()].push_back( std::move( ext ) );
          }
        auto next = queue;
        std::size_t added = 0;
        for ( auto& [to, runs] : children )
        {
          if ( node.history.size() < k_ )
          {
            auto h = node.history;
            h.push_back( to );
            next.push_back( { std::move( h ), std::move( runs ) } );
          }
          else
            for ( auto& run : runs )
            {
              done.push_back( std::move( run ) );
              ++added;
            }
        }
        rec( std::move( next ) );
        done.resize( done.size() - added );
      }
    };

    if ( compatible( prefix ).empty() )
    {
      fn( done );
      return;
    }
    if ( k_ == 0 )
    {
      done.push_back( prefix );
      fn( done );
      return;
    }
    rec( { Pending{ { prefix.states.back() }, { prefix } } } );
  }

  /// Whether Y can steer from (q, A) so that the set of compatible
  /// assignments eventually becomes empty, whatever the others do.
  bool killable( std::vector<AgentId> const& coalition, StateId q, std::set<Assignment> const& A )
  {
    using Node = std::pair<StateId, std::set<Assignment>>;
    auto shrink = [&]( std::set<Assignment> const& from, Tuple const& tup ) {
      std::set<Assignment> out;
      for ( auto const& lam : from )
      {
        bool ok = true;
        for ( std::size_t a = 0; a < tup.size(); ++a )
          ok = ok && permits( lam[a], tup[a] );
        if ( ok )
          out.insert( lam );
      }
      return out;
    };

    std::set<Node> seen{ { q, A } };
    std::vector<Node> todo{ { q, A } };
    while ( !todo.empty() )
    {
      auto n = todo.back();
      todo.pop_back();
      for ( auto const& tup : available( n.first ) )
      {
        Node m{ step( n.first, tup ), shrink( n.second, tup ) };
        if ( !m.second.empty() && seen.insert( m ).second )
          todo.push_back( m );
      }
    }

    std::set<Node> dead;
    bool grew = true;
    while ( grew )
    {
      grew = false;
      for ( auto const& n : seen )
      {
        if ( dead.count( n ) )
          continue;
        std::vector<std::vector<ActionId>> lists;
        for ( auto a : coalition )
          lists.push_back( g_.protocol( a, n.first ) );
        for ( auto const& choice : product( lists ) )
        {
          bool forced = true;
          for ( auto const& tup : available( n.first ) )
          {
            bool follows = true;
            for ( std::size_t y = 0; y < coalition.size(); ++y )
              follows = follows && tup[coalition[y].value] == choice[y];
            if ( !follows )
              continue;
            auto rest = shrink( n.second, tup );
            if ( !rest.empty() && !dead.count( { step( n.first, tup ), rest } ) )
            {
              forced = false;
              break;
            }
          }
          if ( forced )
          {
            dead.insert( n );
            grew = true;
            break;
          }
        }
      }
    }
    return dead.count( { q, A } ) > 0;
  }

  Verdict strategic( Run const& prefix, std::vector<AgentId> const& coalition, TemporalFormula const& goal )
  {
    bool some_win = false;
    bool all_lose = true;
    std::size_t const start = prefix.states.size();
    strategies( prefix, coalition, [&]( std::vector<Run> const& outs ) {
      if ( some_win )
        return;
      std::vector<Verdict> vs;
      for ( auto const& o : outs )
        vs.push_back( temporal( goal, o, start ) );
      bool const win = !vs.empty() && std::all_of( vs.begin(), vs.end(), []( Verdict v ) { return v == Verdict::True; } );
      bool const all_false = std::all_of( vs.begin(), vs.end(), []( Verdict v ) { return v == Verdict::False; } );
      bool robust_false = false;
      for ( std::size_t i = 0; i < outs.size() && !robust_false; ++i )
        if ( vs[i] == Verdict::False )
          robust_false = !killable( coalition, outs[i].states.back(), compatible( outs[i] ) );
      some_win = some_win || win;
      all_lose = all_lose && ( all_false || robust_false );
    } );
    if ( some_win )
      return Verdict::True;
    return all_lose ? Verdict::False : Verdict::Unknown;
  }

private:
  GameStructure const& g_;
  std::size_t k_;
  std::size_t tree_limit_;
};

} // namespace oracle_detail

inline constexpr std::size_t default_oracle_tree_limit = 2'000'000;

/// Definition-literal bounded evaluation of `f` at position i of `rho`.
/// Throws ResourceLimitError when a strategic operator would need more than
/// `tree_limit` strategies.
inline Verdict brute_force_eval( GameStructure const& g, Path const& rho, std::size_t i, CapacityAssignment const& lambda,
                                 PathFormula const& f, std::size_t k,
                                 std::size_t tree_limit = default_oracle_tree_limit )
{
  if ( i < 1 || i > rho.states.size() )
    throw PreconditionError( "oracle: index outside the path" );
  if ( lambda.caps.size() != g.agent_count() )
    throw PreconditionError( "oracle: assignment arity mismatch" );
  oracle_detail::Run run{ rho.states, {} };
  for ( auto const& alpha : rho.actions )
    run.moves.push_back( alpha.actions );
  return oracle_detail::Oracle( g, k, tree_limit ).sat( run, i, f );
}

/// Classical ATL extension of `f` over a structure where every agent has a
/// single capacity.
inline std::set<StateId> atl_fixed_point( GameStructure const& g, PathFormula const& f )
{
  for ( std::uint32_t a = 0; a < g.agent_count(); ++a )
    if ( g.capacities_of( AgentId{ a } ).size() != 1 )
      throw PreconditionError( "atl_fixed_point needs exactly one capacity per agent" );

  std::set<StateId> all;
  for ( std::uint32_t q = 0; q < g.state_count(); ++q )
    all.insert( StateId{ q } );

  auto pre = [&]( std::vector<AgentId> const& Y, std::set<StateId> const& Z ) {
    std::set<StateId> out;
    for ( auto q : all )
    {
      std::vector<std::vector<ActionId>> mine, theirs;
      std::vector<AgentId> others;
      for ( std::uint32_t a = 0; a < g.agent_count(); ++a )
        if ( std::find( Y.begin(), Y.end(), AgentId{ a } ) != Y.end() )
          mine.push_back( g.protocol( AgentId{ a }, q ) );
        else
          others.push_back( AgentId{ a } );
      for ( auto a : others )
        theirs.push_back( g.protocol( a, q ) );
      for ( auto const& c : oracle_detail::product( mine ) )
      {
        bool forces = true;
        for ( auto const& r : oracle_detail::product( theirs ) )
        {
          std::vector<ActionId> tup( g.agent_count() );
          for ( std::size_t y = 0; y < Y.size(); ++y )
            tup[Y[y].value] = c[y];
          for ( std::size_t o = 0; o < others.size(); ++o )
            tup[others[o].value] = r[o];
          auto to = g.transition( q, JointAction{ tup } );
          if ( !to )
            throw PreconditionError( "atl_fixed_point: missing transition" );
          if ( !Z.count( *to ) )
          {
            forces = false;
            break;
          }
        }
        if ( forces )
        {
          out.insert( q );
          break;
        }
      }
    }
    return out;
  };

  auto meet = []( std::set<StateId> const& x, std::set<StateId> const& y ) {
    std::set<StateId> out;
    std::set_intersection( x.begin(), x.end(), y.begin(), y.end(), std::inserter( out, out.end() ) );
    return out;
  };
  auto join = []( std::set<StateId> x, std::set<StateId> const& y ) {
    x.insert( y.begin(), y.end() );
    return x;
  };

  std::function<std::set<StateId>( PathFormula const& )> ext = [&]( PathFormula const& h ) -> std::set<StateId> {
    if ( auto p = std::get_if<Atom>( &h.node ) )
    {
      std::set<StateId> out;
      for ( auto q : all )
        if ( p->prop == top_prop || g.labeled( q, p->prop ) )
          out.insert( q );
      return out;
    }
    if ( std::holds_alternative<Know>( h.node ) )
      throw PreconditionError( "atl_fixed_point does not handle knowledge" );
    if ( auto p = std::get_if<Not>( &h.node ) )
    {
      std::set<StateId> out, in = ext( *p->arg );
      std::set_difference( all.begin(), all.end(), in.begin(), in.end(), std::inserter( out, out.end() ) );
      return out;
    }
    if ( auto p = std::get_if<And>( &h.node ) )
      return meet( ext( *p->lhs ), ext( *p->rhs ) );
    auto const& s = std::get<Strat>( h.node );
    if ( auto p = std::get_if<Next>( &s.goal.node ) )
      return pre( s.coalition, ext( *p->arg ) );
    if ( auto p = std::get_if<Until>( &s.goal.node ) )
    {
      auto const l = ext( *p->lhs ), r = ext( *p->rhs );
      std::set<StateId> z;
      while ( true )
      {
        auto next = join( r, meet( l, pre( s.coalition, z ) ) );
        if ( next == z )
          return z;
        z = std::move( next );
      }
    }
    auto const& rel = std::get<Release>( s.goal.node );
    auto const l = ext( *rel.lhs ), r = ext( *rel.rhs );
    std::set<StateId> z = all;
    while ( true )
    {
      auto next = meet( r, join( l, pre( s.coalition, z ) ) );
      if ( next == z )
        return z;
      z = std::move( next );
    }
  };
  return ext( f );
}

struct GeneratorParams
{
  std::uint64_t seed = 0;
  std::size_t states = 3;             ///< 1..5
  std::size_t agents = 2;             ///< 1..3
  std::size_t capacities = 2;         ///< per agent, 1..2
  std::size_t actions_per_capacity = 2; ///< upper bound on |γ(c)|, 1..2
  double label_density = 0.5;
  std::size_t props = 2;
  double protocol_density = 0.5; ///< chance of offering each extra permitted action
};

/// Random valid structure, a pure function of `params`.
inline GameStructure generate_random_game( GeneratorParams const& params )
{
  if ( params.states < 1 || params.agents < 1 || params.capacities < 1 || params.actions_per_capacity < 1 )
    throw PreconditionError( "generator needs at least one state, agent, capacity and action per capacity" );
  std::mt19937_64 rng( params.seed );
  auto below = [&]( std::size_t n ) { return static_cast<std::size_t>( rng() % n ); };
  auto chance = [&]( double p ) { return static_cast<double>( rng() >> 11 ) * 0x1.0p-53 < p; };

  GameStructure g;
  g.set_name( "random" + std::to_string( params.seed ) );
  for ( std::size_t q = 0; q < params.states; ++q )
    g.add_state( "s" + std::to_string( q ) );
  for ( std::size_t p = 0; p < params.props; ++p )
    g.add_prop( "p" + std::to_string( p ) );
  for ( auto q : g.states() )
    for ( auto p : g.props() )
      if ( chance( params.label_density ) )
        g.add_label( q, p );
  g.set_init( StateId{ 0 } );

  std::vector<std::vector<ActionId>> permitted( params.agents );
  for ( std::size_t a = 0; a < params.agents; ++a )
  {
    auto const agent = g.add_agent( "ag" + std::to_string( a ) );
    std::size_t const pool = params.capacities * params.actions_per_capacity;
    std::vector<std::optional<ActionId>> ids( pool );
    for ( std::size_t j = 0; j < params.capacities; ++j )
    {
      auto const c = g.add_capacity( "c" + std::to_string( a ) + "_" + std::to_string( j ) );
      g.add_agent_capacity( agent, c );
      std::size_t const size = 1 + below( params.actions_per_capacity );
      for ( std::size_t n = 0; n < size; ++n )
      {
        auto const m = below( pool );
        if ( !ids[m] )
          ids[m] = g.add_action( "a" + std::to_string( a ) + "_" + std::to_string( m ) );
        g.add_capacity_action( c, *ids[m] );
      }
    }
    for ( auto const& id : ids )
      if ( id )
        detail::insert_sorted( permitted[a], *id );
  }

  for ( auto a : g.agents() )
    for ( auto q : g.states() )
    {
      std::vector<ActionId> d;
      for ( auto c : g.capacities_of( a ) )
      {
        auto const& acts = g.actions_of( c );
        d.push_back( acts[below( acts.size() )] );
      }
      for ( auto act : permitted[a.value] )
        if ( chance( params.protocol_density ) )
          d.push_back( act );
      g.set_protocol( a, q, std::move( d ) );
    }

  for ( auto q : g.states() )
    for ( auto const& alpha : joint_actions( g, q ) )
      g.set_transition( q, alpha, StateId{ static_cast<std::uint32_t>( below( params.states ) ) } );
  return g;
}

} // namespace upatl
