#include "support.hpp"

#include <gtest/gtest.h>

using namespace upatl;
using upatl::testing::fixture;

namespace
{

CapacityAssignment assignment( GameStructure const& g, std::initializer_list<char const*> caps )
{
  CapacityAssignment lambda( g.agent_count() );
  std::uint32_t a = 0;
  for ( auto c : caps )
    lambda.assign( AgentId{ a++ }, *g.find_capacity( c ) );
  return lambda;
}

Verdict at_s0( GameStructure const& g, std::string_view f, std::size_t k )
{
  return check_state( g, *g.find_state( "s0" ), *parse_formula( f, g ), k );
}

/// From q0 the environment picks between a (good) and b. The coalition agent
/// can later make the b branch inconsistent with every capacity by mixing
/// a left-only and a right-only action.
GameStructure escape_game()
{
  return load_game( R"(game escape
agents: y, e
capacities:
  y: lefty, righty
  e: plain
actions:
  lefty: l
  righty: r
  plain: e1, e2
states: q0, a, b
labels:
  a: good
protocol:
  y @ q0: l, r
  y @ a: l, r
  y @ b: l, r
  e @ q0: e1, e2
  e @ a: e1
  e @ b: e1
transitions:
  q0 (l, e1) -> a
  q0 (l, e2) -> b
  q0 (r, e1) -> a
  q0 (r, e2) -> b
  a (l, e1) -> a
  a (r, e1) -> a
  b (l, e1) -> b
  b (r, e1) -> b
)" );
}

std::vector<GameStructure> property_games()
{
  std::vector<GameStructure> games{ fixture( "hand" ), fixture( "mix" ), escape_game() };
  for ( std::uint64_t seed = 100; seed < 110; ++seed )
    games.push_back( generate_random_game( upatl::testing::sweep_params( seed ) ) );
  return games;
}

} // namespace

TEST( Checker, CapacityFormulas )
{
  auto const g = fixture( "hand" );
  auto const lambda = assignment( g, { "normal", "lefty" } );
  auto const opp = *g.find_agent( "opp" );
  auto const lefty = has_cap( opp, *g.find_capacity( "lefty" ) );
  EXPECT_TRUE( eval_cap_formula( lambda, *lefty ) );
  EXPECT_TRUE( eval_cap_formula( lambda, *cap_not( has_cap( opp, *g.find_capacity( "righty" ) ) ) ) );
  EXPECT_FALSE( eval_cap_formula( lambda, *cap_and( lefty, cap_not( lefty ) ) ) );
  EXPECT_THROW( eval_cap_formula( CapacityAssignment( 2 ), *lefty ), PreconditionError );
}

TEST( Checker, Knowledge )
{
  auto const g = fixture( "hand" );
  auto const obs = *g.find_agent( "obs" );
  auto const opp = *g.find_agent( "opp" );
  auto const lefty = has_cap( opp, *g.find_capacity( "lefty" ) );
  auto const righty = has_cap( opp, *g.find_capacity( "righty" ) );
  EXPECT_TRUE( eval_knowledge( g, parse_path( g, "s0 (watch,swingL) s1" ), 2, obs, *lefty ) );
  EXPECT_FALSE( eval_knowledge( g, parse_path( g, "s0 (watch,serve) s0" ), 2, obs, *lefty ) );
  EXPECT_TRUE( eval_knowledge( g, Path( *g.find_state( "s0" ) ), 1, obs, *cap_or( lefty, righty ) ) );
  EXPECT_THROW( eval_knowledge( g, Path( *g.find_state( "s0" ) ), 2, obs, *lefty ), PreconditionError );
  EXPECT_EQ( check_state( g, *g.find_state( "s1" ), *parse_formula( "K[obs](opp=lefty)", g ), 2 ), Verdict::False );
}

TEST( Checker, KnowledgeMatchesClassDefinition )
{
  for ( auto const& g : property_games() )
  {
    auto const atoms = upatl::testing::cap_atoms( g );
    std::vector<Path> paths;
    for ( auto q : g.states() )
      paths.emplace_back( q );
    for ( int step = 0; step < 2; ++step )
    {
      auto const n = paths.size();
      for ( std::size_t i = 0; i < n; ++i )
        for ( auto const& alpha : joint_actions( g, paths[i].last() ) )
          if ( paths[i].length() == static_cast<std::size_t>( step + 1 ) )
            paths.push_back( paths[i].extended( alpha, successor( g, paths[i].last(), alpha ) ) );
    }
    for ( auto const& p : paths )
      for ( auto a : g.agents() )
        for ( auto const& phi : atoms )
        {
          bool expected = true;
          for ( auto const& other : indistinguishability_class( g, p, a ) )
            for ( auto const& lambda : compatible_assignments( g, other ) )
              expected = expected && eval_cap_formula( lambda, *phi );
          ASSERT_EQ( eval_knowledge( g, p, p.length(), a, *phi ), expected );
          // exact: only the prefix up to i matters
          for ( std::size_t i = 1; i <= p.length(); ++i )
            ASSERT_EQ( eval_knowledge( g, p, i, a, *phi ), eval_knowledge( g, p.prefix( i ), i, a, *phi ) );
        }
  }
}

TEST( Checker, PathFormulaExamples )
{
  auto const g = fixture( "hand" );
  Path const s0( *g.find_state( "s0" ) );
  auto const lefty = assignment( g, { "normal", "lefty" } );
  auto const righty = assignment( g, { "normal", "righty" } );
  EXPECT_EQ( eval_path_formula( { g, s0, 1, lefty, 0 }, *parse_formula( "start", g ) ), Verdict::True );
  auto const f = parse_formula( "<<opp>> N leftHit", g );
  EXPECT_EQ( eval_path_formula( { g, s0, 1, lefty, 1 }, *f ), Verdict::True );
  EXPECT_EQ( eval_path_formula( { g, s0, 1, righty, 1 }, *f ), Verdict::True );
  EXPECT_EQ( brute_force_eval( g, s0, 1, righty, *f, 1 ), Verdict::True );
  EXPECT_THROW( eval_path_formula( { g, s0, 2, lefty, 1 }, *f ), PreconditionError );
  EXPECT_THROW( eval_path_formula( { g, s0, 1, CapacityAssignment( 2 ), 1 }, *f ), PreconditionError );
}

TEST( Checker, TemporalExamples )
{
  auto const g = fixture( "hand" );
  Path const s0( *g.find_state( "s0" ) );
  EvalContext const ctx{ g, s0, 1, canonical_assignment( g ), 1 };
  auto const goal = []( GameStructure const& g, std::string_view text ) {
    return std::get<Strat>( parse_formula( std::string( "<<>> " ) + std::string( text ), g )->node ).goal;
  };
  auto const left = parse_path( g, "s0 (watch,swingL) s1" );
  auto const wait = parse_path( g, "s0 (watch,serve) s0" );
  EXPECT_EQ( eval_temporal( ctx, goal( g, "F leftHit" ), left ), Verdict::True );
  EXPECT_EQ( eval_temporal( ctx, goal( g, "F leftHit" ), wait ), Verdict::Unknown );
  EXPECT_EQ( eval_temporal( ctx, goal( g, "G start" ), wait ), Verdict::Unknown );
  EXPECT_EQ( eval_temporal( ctx, goal( g, "G start" ), left ), Verdict::False );
  EXPECT_EQ( eval_temporal( ctx, goal( g, "N leftHit" ), left ), Verdict::True );
  EXPECT_EQ( eval_temporal( ctx, goal( g, "(start) R (start)" ), wait ), Verdict::True );
  EXPECT_EQ( eval_temporal( ctx, goal( g, "(leftHit) U (rightHit)" ), wait ), Verdict::False );
  EXPECT_THROW( eval_temporal( ctx, goal( g, "N leftHit" ), s0 ), PreconditionError );

  EvalContext const flat{ g, s0, 1, canonical_assignment( g ), 0 };
  EXPECT_EQ( eval_temporal( flat, goal( g, "N leftHit" ), s0 ), Verdict::Unknown );
}

TEST( Checker, ReleaseIsDualToUntil )
{
  for ( auto const& g : property_games() )
  {
    upatl::testing::FormulaSampler sample( g, 7 );
    for ( int i = 0; i < 60; ++i )
    {
      auto const l = sample.path( 1 );
      auto const r = sample.path( 1 );
      for ( auto q : g.states() )
        for ( auto const& alpha : joint_actions( g, q ) )
        {
          auto const o = Path( q ).extended( alpha, successor( g, q, alpha ) );
          EvalContext const ctx{ g, Path( q ), 1, canonical_assignment( g ), 1 };
          ASSERT_EQ( eval_temporal( ctx, release( l, r ), o ), !eval_temporal( ctx, until( neg( l ), neg( r ) ), o ) );
        }
    }
  }
}

TEST( Checker, StrategyTreeCounts )
{
  auto const g = fixture( "hand" );
  auto const s0 = *g.find_state( "s0" );
  EXPECT_EQ( enumerate_strategy_trees( g, s0, { *g.find_agent( "obs" ) }, 2 ).size(), 1u );
  auto const opp = enumerate_strategy_trees( g, s0, { *g.find_agent( "opp" ) }, 1 );
  ASSERT_EQ( opp.size(), 3u );
  std::vector<std::string> roots;
  for ( auto const& t : opp )
    roots.push_back( g.action_name( t.decision( { s0 } )->front() ) );
  EXPECT_EQ( roots, ( std::vector<std::string>{ "serve", "swingL", "swingR" } ) );
  auto const none = enumerate_strategy_trees( g, s0, {}, 3 );
  ASSERT_EQ( none.size(), 1u );
  EXPECT_TRUE( none[0].decisions.empty() );
  // depth 2: serve leads back to s0 (3 choices), each swing to a one-choice state
  EXPECT_EQ( enumerate_strategy_trees( g, s0, { *g.find_agent( "opp" ) }, 2 ).size(), 5u );
  for ( auto const& t : enumerate_strategy_trees( g, s0, { *g.find_agent( "opp" ) }, 3 ) )
    EXPECT_TRUE( validate_strategy( g, t ) );
}

TEST( Checker, StrategicExamples )
{
  auto const g = fixture( "hand" );
  EXPECT_EQ( at_s0( g, "<<opp>> N leftHit", 1 ), Verdict::True );
  EXPECT_EQ( at_s0( g, "<<opp>> N (leftHit & rightHit)", 1 ), Verdict::False );
  for ( std::size_t k = 0; k <= 6; ++k )
    EXPECT_EQ( at_s0( g, "<<obs>> F (K[obs](opp=lefty) | K[obs](opp=righty))", k ), Verdict::Unknown ) << k;
  EXPECT_EQ( at_s0( g, "start", 4 ), Verdict::True );
  EXPECT_EQ( at_s0( g, "<<>> N start", 0 ), Verdict::Unknown );
  EXPECT_EQ( at_s0( g, "<<opp>> F K[obs](opp=righty)", 1 ), Verdict::True );
}

TEST( Checker, MixedCapacitiesPruneOutcomes )
{
  auto const g = fixture( "mix" );
  auto const s0 = *g.find_state( "s0" );
  auto const s1 = *g.find_state( "s1" );
  auto const opp = *g.find_agent( "opp" );
  std::size_t empty = 0;
  for ( auto const& t : enumerate_strategy_trees( g, s0, { opp }, 2 ) )
  {
    auto const outs = outcomes_bounded( g, Path( s0 ), t, 2 );
    bool const mixed = g.action_name( t.decision( { s0 } )->front() ) == "swingL" &&
                       g.action_name( t.decision( { s0, s1 } )->front() ) == "swingR";
    EXPECT_EQ( outs.empty(), mixed );
    empty += outs.empty();
  }
  EXPECT_EQ( empty, 1u );
  // swinging right from s1 is only consistent after serving first
  EXPECT_EQ( at_s0( g, "<<opp>> N <<opp>> N rightHit", 2 ), Verdict::True );
}

TEST( Checker, FalsifiedBranchesTheCoalitionCanLeaveDoNotRefute )
{
  auto const g = escape_game();
  auto const q0 = *g.find_state( "q0" );
  auto const f = parse_formula( "<<y>> N good", g );
  // every depth-1 tree has a falsified outcome through b, yet y escapes b later
  EXPECT_EQ( check_state( g, q0, *f, 1 ), Verdict::Unknown );
  EXPECT_EQ( check_state( g, q0, *f, 2 ), Verdict::True );
  EXPECT_EQ( brute_force_eval( g, Path( q0 ), 1, canonical_assignment( g ), *f, 1 ), Verdict::Unknown );
  EXPECT_EQ( brute_force_eval( g, Path( q0 ), 1, canonical_assignment( g ), *f, 2 ), Verdict::True );
  // the environment cannot be escaped from
  EXPECT_EQ( check_state( g, q0, *parse_formula( "<<e>> N !good", g ), 1 ), Verdict::True );
  EXPECT_EQ( check_state( g, q0, *parse_formula( "<<>> N good", g ), 3 ), Verdict::False );
}

TEST( Checker, AmbientAssignmentIsIrrelevantAtTheRoot )
{
  for ( auto const& g : property_games() )
  {
    auto const lambdas = upatl::testing::all_assignments( g );
    for ( auto const& f : upatl::testing::formula_catalog( g ) )
      for ( auto q : g.states() )
      {
        auto const base = eval_path_formula( { g, Path( q ), 1, lambdas.front(), 2 }, *f );
        for ( auto const& lambda : lambdas )
          ASSERT_EQ( eval_path_formula( { g, Path( q ), 1, lambda, 2 }, *f ), base );
      }
  }
}

TEST( Checker, HorizonMonotonicity )
{
  for ( auto const& g : property_games() )
  {
    upatl::testing::FormulaSampler sample( g, 99 );
    for ( int i = 0; i < 40; ++i )
    {
      auto const f = sample.path( 3 );
      for ( auto q : g.states() )
      {
        Checker first( g, 0 );
        auto settled = first.value( *f, Path( q ) );
        for ( std::size_t k = 1; k <= 3; ++k )
        {
          auto const v = check_state( g, q, *f, k );
          if ( settled != Verdict::Unknown )
          {
            ASSERT_EQ( v, settled ) << render_formula( f, g ) << " k=" << k;
          }
          settled = v;
        }
      }
    }
  }
}

TEST( Checker, WinningStrategyIsFirstWinnerInEnumerationOrder )
{
  for ( auto const& g : property_games() )
    for ( auto const& f : upatl::testing::formula_catalog( g ) )
    {
      auto const* s = std::get_if<Strat>( &f->node );
      if ( !s )
        continue;
      for ( auto q : g.states() )
        for ( std::size_t k = 1; k <= 2; ++k )
        {
          Checker c( g, k );
          auto const witness = c.winning_strategy( Path( q ), s->coalition, s->goal );
          if ( c.value( *f, Path( q ) ) != Verdict::True )
          {
            ASSERT_FALSE( witness );
            continue;
          }
          ASSERT_TRUE( witness );
          std::optional<StrategyTree> first;
          c.for_each_tree( q, s->coalition, [&]( StrategyTree const& t ) {
            auto const outs = outcomes_bounded( g, Path( q ), t, k );
            bool const wins = !outs.empty() && std::all_of( outs.begin(), outs.end(), [&]( Path const& o ) {
                                return c.temporal( s->goal, o, 1 ) == Verdict::True;
                              } );
            if ( wins )
              first = t;
            return !wins;
          } );
          ASSERT_TRUE( first );
          EXPECT_EQ( *witness, *first ) << render_formula( f, g );
          for ( auto const& o : outcomes_bounded( g, Path( q ), *witness, k ) )
            EXPECT_EQ( c.temporal( s->goal, o, 1 ), Verdict::True );
        }
    }
}

TEST( Checker, RefutationCarriesAFalsifiedOutcome )
{
  auto const g = fixture( "hand" );
  auto const s0 = *g.find_state( "s0" );
  Checker c( g, 1 );
  auto const f = parse_formula( "<<opp>> N (leftHit & rightHit)", g );
  auto const& s = std::get<Strat>( f->node );
  auto const r = c.refutation( Path( s0 ), s.coalition, s.goal );
  ASSERT_TRUE( r );
  ASSERT_TRUE( r->outcome );
  EXPECT_EQ( render_path( g, *r->outcome ), "s0 (watch,serve) s0" );
  EXPECT_FALSE( c.refutation( Path( s0 ), s.coalition, std::get<Strat>( parse_formula( "<<opp>> N leftHit", g )->node ).goal ) );
}
