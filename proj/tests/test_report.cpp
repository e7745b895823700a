#include "support.hpp"

#include <gtest/gtest.h>

using namespace upatl;
using upatl::testing::fixture;

TEST( Report, StrategyRoundTrip )
{
  auto const g = fixture( "hand" );
  auto const s0 = *g.find_state( "s0" );
  for ( auto const& y : upatl::testing::coalitions( g ) )
    for ( auto const& t : enumerate_strategy_trees( g, s0, y, 2 ) )
    {
      auto const j = strategy_to_json( g, t );
      auto const back = strategy_from_json( g, Json::parse( j.dump() ) );
      EXPECT_EQ( back, t ) << j.dump();
    }
}

TEST( Report, StrategyShape )
{
  auto const g = fixture( "hand" );
  auto const s0 = *g.find_state( "s0" );
  auto const trees = enumerate_strategy_trees( g, s0, { *g.find_agent( "opp" ) }, 2 );
  auto const j = strategy_to_json( g, trees.back() );
  EXPECT_EQ( j["coalition"], Json::array( { "opp" } ) );
  EXPECT_EQ( j["pivot"], "s0" );
  EXPECT_EQ( j["depth"], 2 );
  EXPECT_EQ( j["root"]["state"], "s0" );
  EXPECT_EQ( j["root"]["actions"]["opp"], "swingR" );
  ASSERT_EQ( j["root"]["children"].size(), 1u );
  EXPECT_EQ( j["root"]["children"][0]["state"], "s2" );
  EXPECT_EQ( j["root"]["children"][0]["actions"]["opp"], "serve" );
}

TEST( Report, StrategyErrors )
{
  auto const g = fixture( "hand" );
  auto const parse = [&]( char const* text ) { return strategy_from_json( g, Json::parse( text ) ); };
  EXPECT_THROW( parse( R"({"coalition":["ref"],"pivot":"s0","depth":1,"root":null})" ), StrategyError );
  EXPECT_THROW( parse( R"({"coalition":["opp"],"pivot":"s0","depth":1,
                           "root":{"state":"s0","actions":{"opp":"watch"},"children":[]}})" ),
                StrategyError );
  EXPECT_THROW( parse( R"({"coalition":["opp"],"pivot":"s0","depth":1,
                           "root":{"state":"s0","actions":{},"children":[]}})" ),
                StrategyError );
  EXPECT_THROW( parse( R"({"coalition":["opp"],"pivot":"s0","depth":1,
                           "root":{"state":"s0","actions":{"opp":"serve"},
                                   "children":[{"state":"s0","actions":{"opp":"serve"}}]}})" ),
                StrategyError );
  EXPECT_THROW( parse( R"({"coalition":["opp"]})" ), StrategyError );
}

TEST( Report, CheckRecordRoundTrip )
{
  auto const g = fixture( "hand" );
  CheckRecord r;
  r.verdict = Verdict::True;
  r.horizon = 1;
  r.state = "s0";
  r.formula = "<<opp>> N leftHit";
  r.witness = Witness{ Witness::Kind::Strategy,
                       strategy_to_json( g, enumerate_strategy_trees( g, *g.find_state( "s0" ), { *g.find_agent( "opp" ) }, 1 )[1] ),
                       std::nullopt };
  r.timing_ms = 1.25;
  auto const text = to_json( r ).dump( 2 );
  EXPECT_EQ( check_record_from_json( Json::parse( text ) ), r );

  CheckRecord refuted = r;
  refuted.verdict = Verdict::False;
  refuted.witness->kind = Witness::Kind::Refutation;
  refuted.witness->outcome = "s0 (watch,serve) s0";
  EXPECT_EQ( check_record_from_json( to_json( refuted ) ), refuted );

  CheckRecord open = r;
  open.verdict = Verdict::Unknown;
  open.witness.reset();
  EXPECT_TRUE( to_json( open )["witness"].is_null() );
  EXPECT_EQ( check_record_from_json( to_json( open ) ), open );

  EXPECT_THROW( check_record_from_json( Json::parse( R"({"verdict":"MAYBE"})" ) ), Error );
  EXPECT_THROW( check_record_from_json( Json::parse( R"({"verdict":"TRUE"})" ) ), Error );
}
