#pragma once

#include "formula.hpp"
#include "trace.hpp"
#include "verdict.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace upatl
{

/// Position of an evaluation: the prefix rho, the 1-based state index i
/// into it, the ambient complete capacity assignment and the horizon.
struct EvalContext
{
  GameStructure const& game;
  Path prefix;
  std::size_t index = 1;
  CapacityAssignment lambda;
  std::size_t horizon = 0;
};

/// Lowest-indexed capacity for every agent.
inline CapacityAssignment canonical_assignment( GameStructure const& g )
{
  CapacityAssignment lambda( g.agent_count() );
  for ( auto a : g.agents() )
  {
    auto const& caps = g.capacities_of( a );
    if ( caps.empty() )
      throw PreconditionError( "agent " + g.agent_name( a ) + " has no capacity" );
    lambda.assign( a, caps.front() );
  }
  return lambda;
}

inline bool eval_cap_formula( CapacityAssignment const& lambda, CapFormula const& f )
{
  return std::visit( overloaded{ [&]( HasCap const& h ) {
                                  auto c = lambda[h.agent];
                                  if ( !c )
                                    throw PreconditionError( "capacity formula evaluated on an incomplete assignment" );
                                  return *c == h.capacity;
                                },
                                 [&]( CapNot const& n ) { return !eval_cap_formula( lambda, *n.arg ); },
                                 [&]( CapAnd const& n ) {
                                   return eval_cap_formula( lambda, *n.lhs ) && eval_cap_formula( lambda, *n.rhs );
                                 } },
                     f.node );
}

/// A losing strategy together with the evidence: a falsified outcome, or none
/// when the strategy admits no outcome at all.
struct Refutation
{
  StrategyTree strategy;
  std::optional<Path> outcome;
};

namespace detail
{

using Masks = std::vector<std::uint64_t>; ///< per agent: bit j set iff the j-th capacity of Γ(a) is still compatible

inline bool all_nonzero( Masks const& m )
{
  return std::all_of( m.begin(), m.end(), []( auto x ) { return x != 0; } );
}

} // namespace detail

/// Bounded three-valued evaluator. Holds compiled tables of a validated
/// structure and memoizes knowledge and strategic subresults by prefix, so
/// one instance serves one horizon. Not thread-safe; use one per thread.
class Checker
{
public:
  Checker( GameStructure const& g, std::size_t horizon ) : g_( g ), horizon_( horizon ) { compile(); }

  GameStructure const& game() const { return g_; }
  std::size_t horizon() const { return horizon_; }

  /// Value of `f` at the last position of `p` (paper index i = |states(p)|).
  Verdict value( PathFormula const& f, Path const& p )
  {
    return std::visit( overloaded{ [&]( Atom const& a ) { return lift( g_.labeled( p.last(), a.prop ) ); },
                                   [&]( Know const& k ) { return lift( knows( p, k.agent, *k.arg ) ); },
                                   [&]( Not const& n ) { return !value( *n.arg, p ); },
                                   [&]( And const& n ) {
                                     auto const l = value( *n.lhs, p );
                                     if ( l == Verdict::False )
                                       return l;
                                     return l && value( *n.rhs, p );
                                   },
                                   [&]( Strat const& s ) {
                                     auto& memo = strat_memo_[&f];
                                     auto const key = encode( p );
                                     if ( auto it = memo.find( key ); it != memo.end() )
                                       return it->second;
                                     auto const v = strategic( p, s.coalition, s.goal );
                                     strat_memo_[&f][key] = v;
                                     return v;
                                   } },
                       f.node );
  }

  /// Exact knowledge: `phi` holds for every assignment compatible with every
  /// path that agent `a` cannot distinguish from `p`.
  bool knows( Path const& p, AgentId a, CapFormula const& phi )
  {
    g_.check( a );
    std::vector<detail::Masks> frontier{ full_ };
    for ( std::size_t t = 0; t < p.actions.size(); ++t )
    {
      std::set<detail::Masks> next;
      for ( auto const& m : frontier )
        for ( auto const& mv : moves_[p.states[t].value] )
        {
          if ( mv.alpha[a] != p.actions[t][a] || mv.to != p.states[t + 1] )
            continue;
          auto m2 = restrict( m, mv );
          if ( detail::all_nonzero( m2 ) )
            next.insert( std::move( m2 ) );
        }
      frontier.assign( next.begin(), next.end() );
    }
    for ( auto const& m : frontier )
    {
      bool holds = true;
      for_each_assignment( m, [&]( CapacityAssignment const& lambda ) {
        holds = eval_cap_formula( lambda, phi );
        return holds;
      } );
      if ( !holds )
        return false;
    }
    return true;
  }

  /// Bounded verdict of a temporal goal on an outcome whose window starts at
  /// state index `start` and ends at the outcome's last state.
  Verdict temporal( TemporalFormula const& goal, Path const& outcome, std::size_t start )
  {
    std::size_t const end = outcome.length();
    auto at = [&]( PathPtr const& f, std::size_t j ) { return value( *f, outcome.prefix( j ) ); };
    return std::visit( overloaded{ [&]( Next const& n ) { return start + 1 <= end ? at( n.arg, start + 1 ) : Verdict::Unknown; },
                                   [&]( Until const& u ) { return until( u.lhs, u.rhs, false, outcome, start ); },
                                   [&]( Release const& r ) { return !until( r.lhs, r.rhs, true, outcome, start ); } },
                       goal.node );
  }

  /// <<Y>> goal at the last position of `p`.
  Verdict strategic( Path const& p, std::vector<AgentId> const& coalition, TemporalFormula const& goal )
  {
    Search s( *this, p, coalition, goal );
    if ( s.can_win() )
      return Verdict::True;
    if ( !s.can_avoid_loss() )
      return Verdict::False;
    return Verdict::Unknown;
  }

  /// The winning strategy that comes first in enumeration order, if any.
  std::optional<StrategyTree> winning_strategy( Path const& p, std::vector<AgentId> const& coalition,
                                                TemporalFormula const& goal )
  {
    Search s( *this, p, coalition, goal );
    if ( !s.can_win() )
      return std::nullopt;

    StrategyTree tree{ coalition, p.last(), horizon_, {} };
    if ( coalition.empty() )
      return tree;
    std::deque<History> queue;
    if ( horizon_ > 0 )
      queue.push_back( History{ p.last() } );
    while ( !queue.empty() )
    {
      auto h = queue.front();
      queue.pop_front();
      auto const& groups = projection( coalition, h.back() );
      bool fixed = false;
      for ( auto const& [choice, idx] : groups )
      {
        tree.decisions[h] = choice;
        if ( s.can_win( &tree.decisions ) )
        {
          fixed = true;
          if ( h.size() < horizon_ )
            for ( auto q : successors( h.back(), idx ) )
            {
              auto child = h;
              child.push_back( q );
              queue.push_back( std::move( child ) );
            }
          break;
        }
      }
      if ( !fixed )
        throw Error( "internal: winning strategy extraction lost feasibility" );
    }
    return tree;
  }

  /// First enumerated strategy with a falsified (or no) outcome, when every strategy loses.
  std::optional<Refutation> refutation( Path const& p, std::vector<AgentId> const& coalition, TemporalFormula const& goal )
  {
    if ( strategic( p, coalition, goal ) != Verdict::False )
      return std::nullopt;
    std::optional<Refutation> out;
    for_each_tree( p.last(), coalition, [&]( StrategyTree const& tree ) {
      Refutation r{ tree, std::nullopt };
      auto outcomes = has_compatible_assignment( g_, p ) ? outcomes_bounded( g_, p, tree, horizon_ ) : std::vector<Path>{};
      for ( auto const& o : outcomes )
        if ( temporal( goal, o, p.length() ) == Verdict::False )
        {
          if ( !r.outcome || robust( coalition, o ) )
            r.outcome = o;
        }
      out = std::move( r );
      return false;
    } );
    return out;
  }

  /// Strategy trees over suffix histories reachable from `pivot`, in
  /// enumeration order: breadth-first by history, lexicographic by action.
  void for_each_tree( StateId pivot, std::vector<AgentId> const& coalition,
                      std::function<bool( StrategyTree const& )> const& fn )
  {
    g_.check( pivot );
    StrategyTree tree{ coalition, pivot, horizon_, {} };
    if ( coalition.empty() || horizon_ == 0 )
    {
      fn( tree );
      return;
    }
    bool stop = false;
    enumerate( std::deque<History>{ History{ pivot } }, tree, fn, stop );
  }

  /// Whether the coalition, even playing with full information, cannot
  /// prevent some compatible continuation of `outcome` from existing.
  bool robust( std::vector<AgentId> const& coalition, Path const& outcome )
  {
    auto const& alive = survivors( coalition );
    return alive.count( { outcome.last(), masks_of( outcome ) } ) > 0;
  }

private:
  struct Move
  {
    JointAction alpha;
    StateId to;
    detail::Masks caps; ///< per agent, capacities permitting its action
  };

  struct Live
  {
    Path path;
    detail::Masks masks;
  };

  using Groups = std::map<std::vector<ActionId>, std::vector<std::size_t>>;

  /// AND-OR search over the history tree of one strategic evaluation.
  class Search
  {
  public:
    Search( Checker& c, Path const& p, std::vector<AgentId> const& coalition, TemporalFormula const& goal )
      : c_( c ), coalition_( coalition ), goal_( goal ), start_( p.length() )
    {
      auto m = c_.masks_of( p );
      if ( detail::all_nonzero( m ) )
        root_.push_back( { p, std::move( m ) } );
    }

    /// Some strategy has a nonempty outcome set on which the goal is TRUE.
    bool can_win( std::map<History, std::vector<ActionId>> const* fixed = nullptr )
    {
      fixed_ = fixed;
      History h;
      if ( !root_.empty() )
        h.push_back( root_.front().path.last() );
      return win( root_, c_.horizon_, h ).second;
    }

    /// Some strategy has no robustly falsified outcome and at least one
    /// outcome that is not FALSE.
    bool can_avoid_loss()
    {
      fixed_ = nullptr;
      return avoid( root_, c_.horizon_ ).second;
    }

  private:
    template<class Fn>
    bool for_each_choice( std::vector<Live> const& lives, History const* h, Fn&& fn )
    {
      auto const& groups = c_.projection( coalition_, lives.front().path.last() );
      std::vector<ActionId> const* only = nullptr;
      if ( fixed_ && h )
        if ( auto it = fixed_->find( *h ); it != fixed_->end() )
          only = &it->second;
      for ( auto const& [choice, idx] : groups )
      {
        if ( only && choice != *only )
          continue;
        std::map<StateId, std::vector<Live>> children;
        for ( auto const& l : lives )
          for ( auto i : idx )
          {
            auto const& mv = c_.moves_[l.path.last().value][i];
            auto m = c_.restrict( l.masks, mv );
            if ( detail::all_nonzero( m ) )
              children[mv.to].push_back( { l.path.extended( mv.alpha, mv.to ), std::move( m ) } );
          }
        if ( fn( children ) )
          return true;
      }
      return false;
    }

    /// (all outcomes TRUE achievable, nonempty and all TRUE achievable)
    std::pair<bool, bool> win( std::vector<Live> const& lives, std::size_t remaining, History& h )
    {
      if ( lives.empty() )
        return { true, false };
      if ( remaining == 0 )
      {
        bool const all_true = std::all_of( lives.begin(), lives.end(), [&]( Live const& l ) {
          return c_.temporal( goal_, l.path, start_ ) == Verdict::True;
        } );
        return { all_true, all_true };
      }
      bool any_all_true = false;
      bool won = for_each_choice( lives, &h, [&]( std::map<StateId, std::vector<Live>> const& children ) {
        bool all_true = true;
        bool nonempty_win = false;
        for ( auto const& [q, sub] : children )
        {
          h.push_back( q );
          auto const r = win( sub, remaining - 1, h );
          h.pop_back();
          if ( !r.first )
          {
            all_true = false;
            break;
          }
          nonempty_win = nonempty_win || r.second;
        }
        any_all_true = any_all_true || all_true;
        return all_true && nonempty_win;
      } );
      return { any_all_true || won, won };
    }

    /// (no robust FALSE achievable, no robust FALSE and some non-FALSE achievable)
    std::pair<bool, bool> avoid( std::vector<Live> const& lives, std::size_t remaining )
    {
      if ( lives.empty() )
        return { true, false };
      if ( remaining == 0 )
      {
        bool no_robust_false = true;
        bool some_open = false;
        for ( auto const& l : lives )
        {
          if ( c_.temporal( goal_, l.path, start_ ) == Verdict::False )
          {
            if ( c_.robust( coalition_, l.path ) )
            {
              no_robust_false = false;
              break;
            }
          }
          else
            some_open = true;
        }
        return { no_robust_false, no_robust_false && some_open };
      }
      bool any_clean = false;
      bool ok = for_each_choice( lives, nullptr, [&]( std::map<StateId, std::vector<Live>> const& children ) {
        bool clean = true;
        bool open = false;
        for ( auto const& [q, sub] : children )
        {
          auto const r = avoid( sub, remaining - 1 );
          if ( !r.first )
          {
            clean = false;
            break;
          }
          open = open || r.second;
        }
        any_clean = any_clean || clean;
        return clean && open;
      } );
      return { any_clean || ok, ok };
    }

    Checker& c_;
    std::vector<AgentId> const& coalition_;
    TemporalFormula const& goal_;
    std::size_t start_;
    std::vector<Live> root_;
    std::map<History, std::vector<ActionId>> const* fixed_ = nullptr;
  };

  void compile()
  {
    for ( auto a : g_.agents() )
    {
      auto const& caps = g_.capacities_of( a );
      if ( caps.size() > 64 )
        throw PreconditionError( "agent " + g_.agent_name( a ) + " has more than 64 capacities" );
      if ( caps.empty() )
        throw PreconditionError( "agent " + g_.agent_name( a ) + " has no capacity" );
      full_.push_back( caps.size() == 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << caps.size() ) - 1 );
      std::vector<std::uint64_t> per_action( g_.action_count(), 0 );
      for ( std::size_t j = 0; j < caps.size(); ++j )
        for ( auto act : g_.actions_of( caps[j] ) )
          per_action[act.value] |= std::uint64_t{ 1 } << j;
      action_caps_.push_back( std::move( per_action ) );
    }
    for ( auto q : g_.states() )
    {
      std::vector<Move> row;
      for ( auto& alpha : joint_actions( g_, q ) )
      {
        auto to = g_.transition( q, alpha );
        if ( !to )
          throw PreconditionError( "structure has no transition for " + render_joint_action( g_, alpha ) + " at " +
                                   g_.state_name( q ) );
        detail::Masks caps;
        for ( auto a : g_.agents() )
          caps.push_back( action_caps_[a.value][alpha[a].value] );
        row.push_back( { std::move( alpha ), *to, std::move( caps ) } );
      }
      if ( row.empty() )
        throw PreconditionError( "no joint action available at " + g_.state_name( q ) );
      moves_.push_back( std::move( row ) );
    }
  }

  detail::Masks restrict( detail::Masks m, Move const& mv ) const
  {
    for ( std::size_t a = 0; a < m.size(); ++a )
      m[a] &= mv.caps[a];
    return m;
  }

  detail::Masks masks_of( Path const& p ) const
  {
    detail::Masks m = full_;
    for ( auto const& alpha : p.actions )
      for ( std::size_t a = 0; a < m.size(); ++a )
        m[a] &= action_caps_[a][alpha.actions[a].value];
    return m;
  }

  template<class Fn>
  void for_each_assignment( detail::Masks const& m, Fn&& fn ) const
  {
    std::vector<std::vector<CapacityId>> choices;
    for ( auto a : g_.agents() )
    {
      std::vector<CapacityId> caps;
      auto const& gamma = g_.capacities_of( a );
      for ( std::size_t j = 0; j < gamma.size(); ++j )
        if ( m[a.value] >> j & 1 )
          caps.push_back( gamma[j] );
      choices.push_back( std::move( caps ) );
    }
    detail::for_each_product( choices, [&]( std::vector<CapacityId> const& pick ) {
      CapacityAssignment lambda( pick.size() );
      for ( std::size_t i = 0; i < pick.size(); ++i )
        lambda.caps[i] = pick[i];
      return fn( lambda );
    } );
  }

  Verdict until( PathPtr const& lhs, PathPtr const& rhs, bool negate, Path const& outcome, std::size_t start )
  {
    auto at = [&]( PathPtr const& f, std::size_t j ) {
      auto const v = value( *f, outcome.prefix( j ) );
      return negate ? !v : v;
    };
    Verdict reached = Verdict::False; // some position already witnesses the goal
    Verdict held = Verdict::True;     // lhs held at every earlier position
    for ( std::size_t j = start; j <= outcome.length(); ++j )
    {
      reached = reached || ( held && at( rhs, j ) );
      if ( reached == Verdict::True )
        return reached;
      held = held && at( lhs, j );
      if ( held == Verdict::False )
        return reached;
    }
    return reached || ( held && Verdict::Unknown );
  }

  /// Moves at `q` grouped by the coalition's part of the joint action, in
  /// lexicographic order of that part.
  Groups const& projection( std::vector<AgentId> const& coalition, StateId q )
  {
    auto& per_state = projections_[coalition_key( coalition )];
    if ( per_state.empty() )
    {
      per_state.resize( g_.state_count() );
      for ( auto s : g_.states() )
        for ( std::size_t i = 0; i < moves_[s.value].size(); ++i )
        {
          std::vector<ActionId> choice;
          for ( auto a : coalition )
            choice.push_back( moves_[s.value][i].alpha[a] );
          per_state[s.value][choice].push_back( i );
        }
    }
    return per_state[q.value];
  }

  std::vector<StateId> successors( StateId q, std::vector<std::size_t> const& idx ) const
  {
    std::vector<StateId> out;
    for ( auto i : idx )
      detail::insert_sorted( out, moves_[q.value][i].to );
    return out;
  }

  void enumerate( std::deque<History> queue, StrategyTree& tree, std::function<bool( StrategyTree const& )> const& fn,
                  bool& stop )
  {
    if ( queue.empty() )
    {
      stop = !fn( tree );
      return;
    }
    auto const h = queue.front();
    queue.pop_front();
    for ( auto const& [choice, idx] : projection( tree.coalition, h.back() ) )
    {
      tree.decisions[h] = choice;
      auto next = queue;
      if ( h.size() < horizon_ )
        for ( auto q : successors( h.back(), idx ) )
        {
          auto child = h;
          child.push_back( q );
          next.push_back( std::move( child ) );
        }
      enumerate( std::move( next ), tree, fn, stop );
      if ( stop )
        break;
    }
    tree.decisions.erase( h );
  }

  /// Greatest fixed point of (state, compatibility) nodes from which every
  /// coalition move leaves some compatible continuation inside the set.
  std::set<std::pair<StateId, detail::Masks>> const& survivors( std::vector<AgentId> const& coalition )
  {
    auto const key = coalition_key( coalition );
    if ( auto it = survivors_.find( key ); it != survivors_.end() )
      return it->second;

    using Node = std::pair<StateId, detail::Masks>;
    std::set<Node> nodes;
    std::deque<Node> work;
    for ( auto q : g_.states() )
      if ( nodes.insert( { q, full_ } ).second )
        work.push_back( { q, full_ } );
    while ( !work.empty() )
    {
      auto n = work.front();
      work.pop_front();
      for ( auto const& mv : moves_[n.first.value] )
      {
        auto m = restrict( n.second, mv );
        if ( detail::all_nonzero( m ) && nodes.insert( { mv.to, m } ).second )
          work.push_back( { mv.to, std::move( m ) } );
      }
    }

    bool changed = true;
    while ( changed )
    {
      changed = false;
      for ( auto it = nodes.begin(); it != nodes.end(); )
      {
        bool keeps = true;
        for ( auto const& [choice, idx] : projection( coalition, it->first ) )
        {
          bool const continues = std::any_of( idx.begin(), idx.end(), [&]( std::size_t i ) {
            auto const& mv = moves_[it->first.value][i];
            auto m = restrict( it->second, mv );
            return detail::all_nonzero( m ) && nodes.count( { mv.to, m } );
          } );
          if ( !continues )
          {
            keeps = false;
            break;
          }
        }
        if ( keeps )
          ++it;
        else
        {
          it = nodes.erase( it );
          changed = true;
        }
      }
    }
    return survivors_[key] = std::move( nodes );
  }

  static std::uint64_t coalition_key( std::vector<AgentId> const& coalition )
  {
    std::uint64_t key = 0;
    for ( auto a : coalition )
    {
      if ( a.value >= 63 )
        throw PreconditionError( "coalitions are limited to the first 63 agents" );
      key |= std::uint64_t{ 1 } << a.value;
    }
    return key;
  }

  static std::u32string encode( Path const& p )
  {
    std::u32string key;
    for ( auto q : p.states )
      key.push_back( static_cast<char32_t>( q.value ) );
    for ( auto const& alpha : p.actions )
      for ( auto act : alpha.actions )
        key.push_back( static_cast<char32_t>( act.value ) );
    return key;
  }

  GameStructure const& g_;
  std::size_t horizon_;
  detail::Masks full_;
  std::vector<std::vector<std::uint64_t>> action_caps_; // [agent][action]
  std::vector<std::vector<Move>> moves_;                // [state]
  std::unordered_map<std::uint64_t, std::vector<Groups>> projections_;
  std::map<std::uint64_t, std::set<std::pair<StateId, detail::Masks>>> survivors_;
  std::unordered_map<PathFormula const*, std::unordered_map<std::u32string, Verdict>> strat_memo_;
};

/* operation-level entry points */

namespace detail
{

inline void check_context( EvalContext const& ctx )
{
  if ( !validate_path( ctx.game, ctx.prefix ) )
    throw PreconditionError( "evaluation prefix is not a valid path" );
  if ( ctx.index < 1 || ctx.index > ctx.prefix.length() )
    throw PreconditionError( "evaluation index " + std::to_string( ctx.index ) + " outside the prefix" );
  if ( !ctx.lambda.complete() || !respects_capacities( ctx.game, ctx.lambda ) )
    throw PreconditionError( "ambient capacity assignment must be complete and respect Γ" );
}

} // namespace detail

/// Knowledge of agent `a` about `phi` after the first `i` states of `rho`.
inline bool eval_knowledge( GameStructure const& g, Path const& rho, std::size_t i, AgentId a, CapFormula const& phi )
{
  if ( i < 1 || i > rho.length() )
    throw PreconditionError( "knowledge index " + std::to_string( i ) + " outside the path" );
  return Checker( g, 0 ).knows( rho.prefix( i ), a, phi );
}

inline Verdict eval_path_formula( EvalContext const& ctx, PathFormula const& f )
{
  detail::check_context( ctx );
  return Checker( ctx.game, ctx.horizon ).value( f, ctx.prefix.prefix( ctx.index ) );
}

/// Verdict of a temporal goal on `outcome`, which must extend the context's
/// prefix up to index i by exactly `horizon` steps.
inline Verdict eval_temporal( EvalContext const& ctx, TemporalFormula const& goal, Path const& outcome )
{
  detail::check_context( ctx );
  auto const base = ctx.prefix.prefix( ctx.index );
  if ( outcome.length() != base.length() + ctx.horizon || outcome.prefix( base.length() ) != base )
    throw PreconditionError( "outcome must extend the evaluation prefix by exactly the horizon" );
  return Checker( ctx.game, ctx.horizon ).temporal( goal, outcome, base.length() );
}

inline Verdict eval_strategic( EvalContext const& ctx, std::vector<AgentId> coalition, TemporalFormula const& goal )
{
  detail::check_context( ctx );
  std::sort( coalition.begin(), coalition.end() );
  coalition.erase( std::unique( coalition.begin(), coalition.end() ), coalition.end() );
  return Checker( ctx.game, ctx.horizon ).strategic( ctx.prefix.prefix( ctx.index ), coalition, goal );
}

inline std::vector<StrategyTree> enumerate_strategy_trees( GameStructure const& g, StateId pivot,
                                                           std::vector<AgentId> coalition, std::size_t horizon )
{
  std::sort( coalition.begin(), coalition.end() );
  coalition.erase( std::unique( coalition.begin(), coalition.end() ), coalition.end() );
  std::vector<StrategyTree> out;
  Checker( g, horizon ).for_each_tree( pivot, coalition, [&]( StrategyTree const& t ) {
    out.push_back( t );
    return true;
  } );
  return out;
}

/// Verdict of `f` at state `q`: evaluated on the one-state path (q) under the
/// canonical capacity assignment.
inline Verdict check_state( GameStructure const& g, StateId q, PathFormula const& f, std::size_t horizon )
{
  g.check( q );
  return eval_path_formula( EvalContext{ g, Path( q ), 1, canonical_assignment( g ), horizon }, f );
}

} // namespace upatl
