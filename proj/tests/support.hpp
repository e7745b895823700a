#pragma once

#include <upatl/upatl.hpp>

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace upatl::testing
{

inline std::string read_file( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw std::runtime_error( "cannot open " + path );
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GameStructure fixture( std::string const& name )
{
  return load_game( read_file( std::string( UPATL_GAMES_DIR ) + "/" + name + ".game" ) );
}

inline std::vector<std::vector<AgentId>> coalitions( GameStructure const& g )
{
  std::vector<std::vector<AgentId>> out;
  for ( std::uint32_t mask = 0; mask < ( 1u << g.agent_count() ); ++mask )
  {
    std::vector<AgentId> y;
    for ( std::uint32_t a = 0; a < g.agent_count(); ++a )
      if ( mask >> a & 1 )
        y.push_back( AgentId{ a } );
    out.push_back( std::move( y ) );
  }
  return out;
}

inline std::vector<CapPtr> cap_atoms( GameStructure const& g )
{
  std::vector<CapPtr> out;
  for ( auto b : g.agents() )
    for ( auto c : g.capacities_of( b ) )
      out.push_back( has_cap( b, c ) );
  return out;
}

inline std::vector<PathPtr> knowledge_atoms( GameStructure const& g )
{
  std::vector<PathPtr> out;
  for ( auto a : g.agents() )
    for ( auto const& phi : cap_atoms( g ) )
      out.push_back( know( a, phi ) );
  return out;
}

/// Template catalog of formulas with nesting depth at most 3, instantiated
/// over every proposition, agent, capacity and coalition of `g`.
inline std::vector<PathPtr> formula_catalog( GameStructure const& g )
{
  std::vector<PathPtr> lits;
  for ( auto p : g.props() )
    lits.push_back( atom( p ) );
  auto const ks = knowledge_atoms( g );
  auto const ys = coalitions( g );

  std::vector<PathPtr> out;
  for ( auto const& l : lits )
  {
    out.push_back( l );
    out.push_back( neg( l ) );
    for ( auto const& r : lits )
      out.push_back( conj( l, r ) );
  }
  for ( auto const& k : ks )
  {
    out.push_back( k );
    out.push_back( neg( k ) );
  }
  for ( auto const& y : ys )
  {
    for ( auto const& l : lits )
    {
      out.push_back( strat( y, next( l ) ) );
      out.push_back( neg( strat( y, next( l ) ) ) );
      out.push_back( strat( y, always( l ) ) );
      for ( auto const& r : lits )
      {
        out.push_back( strat( y, until( l, r ) ) );
        out.push_back( strat( y, release( l, r ) ) );
        out.push_back( strat( y, until( neg( l ), r ) ) );
      }
      for ( auto const& z : ys )
        out.push_back( strat( y, next( strat( z, next( l ) ) ) ) );
    }
    for ( auto const& k : ks )
    {
      out.push_back( strat( y, next( k ) ) );
      out.push_back( strat( y, eventually( k ) ) );
    }
  }
  return out;
}

inline std::vector<CapacityAssignment> all_assignments( GameStructure const& g )
{
  auto const set = complete_assignments( g );
  return { set.begin(), set.end() };
}

/// Small generated games on which the brute-force oracle stays tractable.
inline GeneratorParams sweep_params( std::uint64_t seed )
{
  GeneratorParams p;
  p.seed = seed;
  constexpr std::pair<std::size_t, std::size_t> shapes[]{ { 2, 1 }, { 3, 1 }, { 4, 1 }, { 2, 2 },
                                                          { 3, 2 }, { 4, 2 }, { 2, 3 } };
  auto const [states, agents] = shapes[seed % std::size( shapes )];
  p.states = states;
  p.agents = agents;
  p.capacities = 1 + ( seed / 2 ) % 2;
  p.actions_per_capacity = 1 + ( seed / 5 ) % 2;
  p.label_density = 0.5;
  p.props = 2;
  p.protocol_density = 0.3;
  return p;
}

/// Random formula AST of bounded depth over `g`'s vocabulary.
class FormulaSampler
{
public:
  FormulaSampler( GameStructure const& g, std::uint64_t seed ) : g_( g ), rng_( seed ) {}

  PathPtr path( std::size_t depth )
  {
    auto const pick = depth == 0 ? below( 2 ) : below( 9 );
    switch ( pick )
    {
    case 0:
      return g_.prop_count() && below( 4 ) ? atom( PropId{ static_cast<std::uint32_t>( below( g_.prop_count() ) ) } )
                                           : ( below( 2 ) ? truth() : falsity() );
    case 1:
      return know( agent(), cap( depth == 0 ? 0 : depth - 1 ) );
    case 2:
      return neg( path( depth - 1 ) );
    case 3:
      return conj( path( depth - 1 ), path( depth - 1 ) );
    case 4:
      return disj( path( depth - 1 ), path( depth - 1 ) );
    case 5:
      return implies( path( depth - 1 ), path( depth - 1 ) );
    default:
      return strat( coalition(), temporal( depth - 1 ) );
    }
  }

  CapPtr cap( std::size_t depth )
  {
    auto const pick = depth == 0 ? 0 : below( 4 );
    if ( pick == 0 )
    {
      auto b = agent();
      auto const& caps = g_.capacities_of( b );
      return has_cap( b, caps[below( caps.size() )] );
    }
    if ( pick == 1 )
      return cap_not( cap( depth - 1 ) );
    if ( pick == 2 )
      return cap_and( cap( depth - 1 ), cap( depth - 1 ) );
    return cap_or( cap( depth - 1 ), cap( depth - 1 ) );
  }

  TemporalFormula temporal( std::size_t depth )
  {
    switch ( below( 5 ) )
    {
    case 0:
      return next( path( depth ) );
    case 1:
      return until( path( depth ), path( depth ) );
    case 2:
      return release( path( depth ), path( depth ) );
    case 3:
      return eventually( path( depth ) );
    default:
      return always( path( depth ) );
    }
  }

  std::vector<AgentId> coalition()
  {
    std::vector<AgentId> y;
    for ( auto a : g_.agents() )
      if ( below( 2 ) )
        y.push_back( a );
    return y;
  }

  AgentId agent() { return AgentId{ static_cast<std::uint32_t>( below( g_.agent_count() ) ) }; }

  std::size_t below( std::size_t n ) { return static_cast<std::size_t>( rng_() % n ); }

private:
  GameStructure const& g_;
  std::mt19937_64 rng_;
};

} // namespace upatl::testing
