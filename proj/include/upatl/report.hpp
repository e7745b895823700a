#pragma once

// Machine-readable records. A check record looks like
//
//   {
//     "verdict": "TRUE" | "FALSE" | "UNKNOWN",
//     "horizon": 1,
//     "state": "s0",
//     "formula": "<<opp>> N leftHit",
//     "witness": null | {
//       "kind": "strategy" | "refutation",
//       "strategy": <strategy>,
//       "outcome": null | "s0 (watch,serve) s0"
//     },
//     "timing_ms": 0.42
//   }
//
// and a strategy (also the input format of `outcomes --strategy`) is a
// nested decision map rooted at the pivot:
//
//   {
//     "coalition": ["opp"],
//     "pivot": "s0",
//     "depth": 1,
//     "root": null | {
//       "state": "s0",
//       "actions": { "opp": "swingL" },
//       "children": [ { "state": ..., "actions": ..., "children": [...] } ]
//     }
//   }

#include "trace.hpp"
#include "verdict.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace upatl
{

using Json = nlohmann::ordered_json;

inline Verdict parse_verdict( std::string_view s )
{
  if ( s == "TRUE" )
    return Verdict::True;
  if ( s == "FALSE" )
    return Verdict::False;
  if ( s == "UNKNOWN" )
    return Verdict::Unknown;
  throw Error( "unknown verdict '" + std::string( s ) + "'" );
}

namespace detail
{

inline Json strategy_node( GameStructure const& g, StrategyTree const& sigma, History const& h )
{
  auto const* acts = sigma.decision( h );
  Json node;
  node["state"] = g.state_name( h.back() );
  node["actions"] = Json::object();
  for ( std::size_t i = 0; i < sigma.coalition.size(); ++i )
    node["actions"][g.agent_name( sigma.coalition[i] )] = g.action_name( ( *acts )[i] );
  node["children"] = Json::array();
  for ( auto it = sigma.decisions.upper_bound( h ); it != sigma.decisions.end(); ++it )
  {
    auto const& child = it->first;
    if ( child.size() == h.size() + 1 && std::equal( h.begin(), h.end(), child.begin() ) )
      node["children"].push_back( strategy_node( g, sigma, child ) );
  }
  return node;
}

template<class Id, class Find>
Id lookup( Find&& find, std::string const& name, char const* what )
{
  auto id = find( name );
  if ( !id )
    throw StrategyError( std::string( "unknown " ) + what + " '" + name + "' in strategy" );
  return *id;
}

inline void read_node( GameStructure const& g, Json const& node, History h, StrategyTree& sigma )
{
  auto const q = lookup<StateId>( [&]( auto const& n ) { return g.find_state( n ); },
                                  node.at( "state" ).get<std::string>(), "state" );
  h.push_back( q );
  auto const& acts = node.at( "actions" );
  std::vector<ActionId> decision;
  for ( auto a : sigma.coalition )
  {
    auto const& name = g.agent_name( a );
    if ( !acts.contains( name ) )
      throw StrategyError( "strategy node at " + g.state_name( q ) + " has no action for " + name );
    decision.push_back( lookup<ActionId>( [&]( auto const& n ) { return g.find_action( n ); },
                                          acts.at( name ).get<std::string>(), "action" ) );
  }
  if ( acts.size() != sigma.coalition.size() )
    throw StrategyError( "strategy node at " + g.state_name( q ) + " names agents outside the coalition" );
  if ( !sigma.decisions.emplace( h, std::move( decision ) ).second )
    throw StrategyError( "strategy repeats a history" );
  if ( node.contains( "children" ) )
    for ( auto const& child : node.at( "children" ) )
      read_node( g, child, h, sigma );
}

} // namespace detail

inline Json strategy_to_json( GameStructure const& g, StrategyTree const& sigma )
{
  Json j;
  j["coalition"] = Json::array();
  for ( auto a : sigma.coalition )
    j["coalition"].push_back( g.agent_name( a ) );
  j["pivot"] = g.state_name( sigma.pivot );
  j["depth"] = sigma.depth;
  History const root{ sigma.pivot };
  j["root"] = sigma.decision( root ) ? detail::strategy_node( g, sigma, root ) : Json();
  return j;
}

/// Throws StrategyError on unknown names, missing actions, or decisions
/// outside the protocol.
inline StrategyTree strategy_from_json( GameStructure const& g, Json const& j )
{
  try
  {
    StrategyTree sigma;
    for ( auto const& name : j.at( "coalition" ) )
      sigma.coalition.push_back( detail::lookup<AgentId>( [&]( auto const& n ) { return g.find_agent( n ); },
                                                          name.get<std::string>(), "agent" ) );
    std::sort( sigma.coalition.begin(), sigma.coalition.end() );
    if ( std::adjacent_find( sigma.coalition.begin(), sigma.coalition.end() ) != sigma.coalition.end() )
      throw StrategyError( "coalition lists an agent twice" );
    sigma.pivot = detail::lookup<StateId>( [&]( auto const& n ) { return g.find_state( n ); },
                                           j.at( "pivot" ).get<std::string>(), "state" );
    sigma.depth = j.at( "depth" ).get<std::size_t>();
    if ( j.contains( "root" ) && !j.at( "root" ).is_null() )
    {
      if ( j.at( "root" ).at( "state" ).get<std::string>() != g.state_name( sigma.pivot ) )
        throw StrategyError( "strategy root is not at the pivot" );
      detail::read_node( g, j.at( "root" ), {}, sigma );
    }
    if ( !validate_strategy( g, sigma ) )
      throw StrategyError( "strategy prescribes an action outside the protocol or beyond its depth" );
    return sigma;
  }
  catch ( Json::exception const& e )
  {
    throw StrategyError( std::string( "malformed strategy: " ) + e.what() );
  }
}

struct Witness
{
  enum class Kind
  {
    Strategy,
    Refutation
  };
  Kind kind = Kind::Strategy;
  Json strategy;
  std::optional<std::string> outcome;

  bool operator==( Witness const& ) const = default;
};

struct CheckRecord
{
  Verdict verdict = Verdict::Unknown;
  std::size_t horizon = 0;
  std::string state;
  std::string formula;
  std::optional<Witness> witness;
  double timing_ms = 0;

  bool operator==( CheckRecord const& ) const = default;
};

inline Json to_json( CheckRecord const& r )
{
  Json j;
  j["verdict"] = to_string( r.verdict );
  j["horizon"] = r.horizon;
  j["state"] = r.state;
  j["formula"] = r.formula;
  if ( r.witness )
  {
    Json w;
    w["kind"] = r.witness->kind == Witness::Kind::Strategy ? "strategy" : "refutation";
    w["strategy"] = r.witness->strategy;
    w["outcome"] = r.witness->outcome ? Json( *r.witness->outcome ) : Json();
    j["witness"] = std::move( w );
  }
  else
    j["witness"] = nullptr;
  j["timing_ms"] = r.timing_ms;
  return j;
}

inline CheckRecord check_record_from_json( Json const& j )
{
  try
  {
    CheckRecord r;
    r.verdict = parse_verdict( j.at( "verdict" ).get<std::string>() );
    r.horizon = j.at( "horizon" ).get<std::size_t>();
    r.state = j.at( "state" ).get<std::string>();
    r.formula = j.at( "formula" ).get<std::string>();
    if ( auto const& w = j.at( "witness" ); !w.is_null() )
    {
      Witness wit;
      auto const kind = w.at( "kind" ).get<std::string>();
      if ( kind != "strategy" && kind != "refutation" )
        throw Error( "unknown witness kind '" + kind + "'" );
      wit.kind = kind == "strategy" ? Witness::Kind::Strategy : Witness::Kind::Refutation;
      wit.strategy = w.at( "strategy" );
      if ( !w.at( "outcome" ).is_null() )
        wit.outcome = w.at( "outcome" ).get<std::string>();
      r.witness = std::move( wit );
    }
    r.timing_ms = j.at( "timing_ms" ).get<double>();
    return r;
  }
  catch ( Json::exception const& e )
  {
    throw Error( std::string( "malformed check record: " ) + e.what() );
  }
}

} // namespace upatl
