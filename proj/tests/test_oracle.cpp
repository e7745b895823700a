#include "support.hpp"

#include <gtest/gtest.h>

using namespace upatl;
using upatl::testing::fixture;

namespace
{

/// Single agent moving between A and B; p holds on B only.
GameStructure cycle()
{
  return load_game( R"(game cycle
agents: one
capacities:
  one: only
actions:
  only: stay, go
states: A, B
labels:
  B: p
protocol:
  one @ A: stay, go
  one @ B: stay, go
transitions:
  A (stay) -> A
  A (go) -> B
  B (stay) -> B
  B (go) -> A
)" );
}

Verdict oracle_at( GameStructure const& g, char const* state, std::string_view f, std::size_t k )
{
  auto const q = *g.find_state( state );
  return brute_force_eval( g, Path( q ), 1, canonical_assignment( g ), *parse_formula( f, g ), k );
}

} // namespace

TEST( Oracle, HandednessValues )
{
  auto const g = fixture( "hand" );
  EXPECT_EQ( oracle_at( g, "s0", "start", 0 ), Verdict::True );
  EXPECT_EQ( oracle_at( g, "s0", "<<opp>> N leftHit", 1 ), Verdict::True );
  EXPECT_EQ( oracle_at( g, "s0", "<<opp>> N (leftHit & rightHit)", 1 ), Verdict::False );
  for ( std::size_t k = 0; k <= 6; ++k )
    EXPECT_EQ( oracle_at( g, "s0", "<<obs>> F (K[obs](opp=lefty) | K[obs](opp=righty))", k ), Verdict::Unknown );
  EXPECT_EQ( oracle_at( g, "s1", "K[obs](opp=lefty)", 1 ), Verdict::False );
  auto const left = parse_path( g, "s0 (watch,swingL) s1" );
  EXPECT_EQ( brute_force_eval( g, left, 2, canonical_assignment( g ), *parse_formula( "K[obs](opp=lefty)", g ), 0 ),
             Verdict::True );
  auto const wait = parse_path( g, "s0 (watch,serve) s0" );
  EXPECT_EQ( brute_force_eval( g, wait, 2, canonical_assignment( g ),
                               *parse_formula( "!K[obs](opp=lefty) & !K[obs](opp=righty)", g ), 0 ),
             Verdict::True );
}

TEST( Oracle, AgreesWithCheckerOnFixtures )
{
  for ( auto const& g : { fixture( "hand" ), fixture( "mix" ) } )
    for ( auto const& f : upatl::testing::formula_catalog( g ) )
      for ( auto q : g.states() )
        for ( std::size_t k = 0; k <= 2; ++k )
          ASSERT_EQ( check_state( g, q, *f, k ), brute_force_eval( g, Path( q ), 1, canonical_assignment( g ), *f, k ) )
              << render_formula( f, g ) << " at " << g.state_name( q ) << " k=" << k;
}

TEST( Oracle, ResourceGuard )
{
  auto const g = fixture( "hand" );
  auto const f = parse_formula( "<<opp>> G !leftHit", g );
  EXPECT_THROW( brute_force_eval( g, Path( *g.find_state( "s0" ) ), 1, canonical_assignment( g ), *f, 3, 2 ),
                ResourceLimitError );
}

TEST( Oracle, FixedPointOnCycle )
{
  auto const g = cycle();
  auto const A = *g.find_state( "A" );
  auto const B = *g.find_state( "B" );
  EXPECT_EQ( atl_fixed_point( g, *parse_formula( "<<one>> F p", g ) ), ( std::set<StateId>{ A, B } ) );
  EXPECT_EQ( atl_fixed_point( g, *parse_formula( "<<>> F p", g ) ), std::set<StateId>{ B } );
  EXPECT_EQ( atl_fixed_point( g, *parse_formula( "<<one>> G !p", g ) ), std::set<StateId>{ A } );
  EXPECT_EQ( atl_fixed_point( g, *parse_formula( "<<>> N p", g ) ), std::set<StateId>{} );
  EXPECT_EQ( atl_fixed_point( g, *parse_formula( "<<one>> N p", g ) ), ( std::set<StateId>{ A, B } ) );
}

TEST( Oracle, EmptyCoalitionNextIsUniversal )
{
  for ( std::uint64_t seed = 0; seed < 30; ++seed )
  {
    auto p = upatl::testing::sweep_params( seed );
    p.capacities = 1;
    auto const g = generate_random_game( p );
    auto const got = atl_fixed_point( g, *strat( {}, next( atom( PropId{ 0 } ) ) ) );
    for ( auto q : g.states() )
    {
      auto const moves = joint_actions( g, q );
      bool const all = std::all_of( moves.begin(), moves.end(),
                                    [&]( auto const& alpha ) { return g.labeled( successor( g, q, alpha ), PropId{ 0 } ); } );
      EXPECT_EQ( got.count( q ) > 0, all );
    }
  }
}

TEST( Oracle, FixedPointPreconditions )
{
  auto const g = fixture( "hand" );
  EXPECT_THROW( atl_fixed_point( g, *parse_formula( "start", g ) ), PreconditionError );
  EXPECT_THROW( atl_fixed_point( cycle(), *parse_formula( "K[one](one=only)", cycle() ) ), PreconditionError );
}

TEST( Oracle, DegenerateFragmentSample )
{
  for ( std::uint64_t seed = 0; seed < 10; ++seed )
  {
    auto p = upatl::testing::sweep_params( seed );
    p.capacities = 1;
    auto const g = generate_random_game( p );
    for ( auto const& y : upatl::testing::coalitions( g ) )
    {
      auto const f = strat( y, until( atom( PropId{ 0 } ), atom( PropId{ 1 } ) ) );
      auto const expected = atl_fixed_point( g, *f );
      for ( auto q : g.states() )
        EXPECT_EQ( check_state( g, q, *f, g.state_count() ) == Verdict::True, expected.count( q ) > 0 );
    }
  }
}

TEST( Generator, DeterministicAndValid )
{
  for ( std::uint64_t seed = 0; seed < 500; ++seed )
  {
    GeneratorParams p;
    p.seed = seed;
    p.states = 1 + seed % 5;
    p.agents = 1 + seed % 3;
    p.capacities = 1 + seed % 2;
    p.actions_per_capacity = 1 + ( seed / 3 ) % 2;
    p.label_density = static_cast<double>( seed % 11 ) / 10;
    auto const g = generate_random_game( p );
    ASSERT_TRUE( validate_structure( g ).ok() ) << seed;
    if ( seed % 50 == 0 )
    {
      EXPECT_EQ( render_game( g ), render_game( generate_random_game( p ) ) );
    }
  }
}

TEST( Generator, SingleCapacityGamesAreCapacityFree )
{
  auto p = upatl::testing::sweep_params( 3 );
  p.capacities = 1;
  auto const g = generate_random_game( p );
  for ( auto a : g.agents() )
    EXPECT_EQ( g.capacities_of( a ).size(), 1u );
  EXPECT_NO_THROW( atl_fixed_point( g, *parse_formula( "<<>> N p0", g ) ) );
  EXPECT_THROW( generate_random_game( GeneratorParams{ .seed = 1, .states = 0 } ), PreconditionError );
}
