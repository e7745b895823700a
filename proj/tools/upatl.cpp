#include <upatl/upatl.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace upatl;

namespace
{

enum Exit : int
{
  ok = 0,
  refuted = 1,
  undecided = 2,
  usage = 64,
  bad_input = 65,
  internal = 70
};

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Options
{
  bool json = false;
  std::string game;
  std::string formula;
  std::string state;
  std::size_t horizon = 3;
  std::string path;
  std::string agent;
  std::string strategy;
  std::string input;
  std::string fmt_game;
  GeneratorParams gen;
};

std::string slurp( std::string const& file )
{
  std::ifstream in( file, std::ios::binary );
  if ( !in )
    throw UsageError( "cannot read " + file );
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GameStructure load( std::string const& file )
{
  try
  {
    return load_game( slurp( file ) );
  }
  catch ( ParseError const& e )
  {
    throw ParseError( file + ":" + e.span().str() + ": " + e.message(), e.span() );
  }
  catch ( BindError const& e )
  {
    std::vector<Diagnostic> located;
    for ( auto d : e.diagnostics() )
    {
      d.message = file + ":" + d.span.str() + ": " + d.message;
      located.push_back( std::move( d ) );
    }
    throw BindError( std::move( located ) );
  }
}

StateId state_named( GameStructure const& g, std::string const& name )
{
  if ( name.empty() )
  {
    if ( !g.init() )
      throw UsageError( "no -s given and the game declares no init state" );
    return *g.init();
  }
  auto q = g.find_state( name );
  if ( !q )
    throw Error( "unknown state '" + name + "'" );
  return *q;
}

void print_tree( std::ostream& os, Json const& node, std::size_t indent )
{
  os << std::string( indent, ' ' ) << node["state"].get<std::string>() << ":";
  for ( auto const& [agent, action] : node["actions"].items() )
    os << " " << agent << "=" << action.get<std::string>();
  os << "\n";
  for ( auto const& child : node["children"] )
    print_tree( os, child, indent + 2 );
}

void print_strategy( std::ostream& os, Json const& s )
{
  if ( s["root"].is_null() )
    os << "  (no decisions)\n";
  else
    print_tree( os, s["root"], 2 );
}

/// Strategic operator at the top of `f` once negations are peeled off.
Strat const* top_strategic( PathFormula const& f )
{
  PathFormula const* at = &f;
  while ( auto const* n = std::get_if<Not>( &at->node ) )
    at = n->arg.get();
  return std::get_if<Strat>( &at->node );
}

int run_validate( Options const& o )
{
  auto const doc = [&] {
    try
    {
      return parse_game( slurp( o.game ) );
    }
    catch ( ParseError const& e )
    {
      throw ParseError( o.game + ":" + e.span().str() + ": " + e.message(), e.span() );
    }
  }();
  std::vector<Diagnostic> diags;
  std::optional<GameStructure> g;
  try
  {
    g = bind_game( doc );
  }
  catch ( BindError const& e )
  {
    diags = e.diagnostics();
  }
  if ( o.json )
  {
    Json j;
    j["valid"] = diags.empty();
    j["violations"] = Json::array();
    for ( auto const& d : diags )
      j["violations"].push_back( { { "line", d.span.line }, { "column", d.span.column }, { "message", d.message } } );
    std::cout << j.dump( 2 ) << "\n";
  }
  else if ( diags.empty() )
    std::cout << "valid: " << g->agent_count() << " agents, " << g->state_count() << " states, "
              << g->transitions().size() << " transitions\n";
  for ( auto const& d : diags )
    std::cerr << o.game << ":" << d.span.str() << ": " << d.message << "\n";
  return diags.empty() ? ok : bad_input;
}

int run_check( Options const& o )
{
  auto const g = load( o.game );
  auto const q = state_named( g, o.state );
  auto const f = parse_formula( o.formula, g );

  auto const start = std::chrono::steady_clock::now();
  Checker checker( g, o.horizon );
  Path const root( q );
  CheckRecord record;
  record.verdict = checker.value( *f, root );
  record.horizon = o.horizon;
  record.state = g.state_name( q );
  record.formula = render_formula( f, g );
  if ( auto const* s = top_strategic( *f ) )
  {
    if ( auto tree = checker.winning_strategy( root, s->coalition, s->goal ) )
      record.witness = Witness{ Witness::Kind::Strategy, strategy_to_json( g, *tree ), std::nullopt };
    else if ( auto r = checker.refutation( root, s->coalition, s->goal ) )
      record.witness =
          Witness{ Witness::Kind::Refutation, strategy_to_json( g, r->strategy ),
                   r->outcome ? std::optional<std::string>( render_path( g, *r->outcome ) ) : std::nullopt };
  }
  record.timing_ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();

  if ( o.json )
    std::cout << to_json( record ).dump( 2 ) << "\n";
  else
  {
    std::cout << record.verdict << "\n";
    if ( record.witness && record.witness->kind == Witness::Kind::Strategy )
    {
      std::cout << "winning strategy:\n";
      print_strategy( std::cout, record.witness->strategy );
    }
    else if ( record.witness )
    {
      std::cout << "first strategy in enumeration order:\n";
      print_strategy( std::cout, record.witness->strategy );
      if ( record.witness->outcome )
        std::cout << "falsified on: " << *record.witness->outcome << "\n";
      else
        std::cout << "it has no outcomes\n";
    }
  }
  switch ( record.verdict )
  {
  case Verdict::True:
    return ok;
  case Verdict::False:
    return refuted;
  default:
    return undecided;
  }
}

int run_compat( Options const& o )
{
  auto const g = load( o.game );
  auto const rho = parse_path( g, o.path );
  auto const assignments = compatible_assignments( g, rho );
  if ( o.json )
  {
    Json j = Json::array();
    for ( auto const& lambda : assignments )
    {
      Json entry = Json::object();
      for ( auto a : g.agents() )
        entry[g.agent_name( a )] = g.capacity_name( *lambda[a] );
      j.push_back( std::move( entry ) );
    }
    std::cout << j.dump( 2 ) << "\n";
  }
  else
  {
    for ( auto const& lambda : assignments )
      std::cout << render_assignment( g, lambda ) << "\n";
    if ( assignments.empty() )
      std::cout << "(none)\n";
  }
  return ok;
}

int run_classes( Options const& o )
{
  auto const g = load( o.game );
  auto const rho = parse_path( g, o.path );
  auto const a = g.find_agent( o.agent );
  if ( !a )
    throw Error( "unknown agent '" + o.agent + "'" );
  auto const members = indistinguishability_class( g, rho, *a );
  if ( o.json )
  {
    Json j = Json::array();
    for ( auto const& p : members )
      j.push_back( render_path( g, p ) );
    std::cout << j.dump( 2 ) << "\n";
  }
  else
    for ( auto const& p : members )
      std::cout << render_path( g, p ) << "\n";
  return ok;
}

int run_outcomes( Options const& o )
{
  auto const g = load( o.game );
  auto const rho = parse_path( g, o.path );
  Json doc;
  try
  {
    doc = Json::parse( slurp( o.strategy ) );
  }
  catch ( Json::parse_error const& e )
  {
    throw StrategyError( o.strategy + ": " + e.what() );
  }
  auto const sigma = strategy_from_json( g, doc );
  auto const outs = outcomes_bounded( g, rho, sigma, o.horizon );
  if ( o.json )
  {
    Json j = Json::array();
    for ( auto const& p : outs )
      j.push_back( render_path( g, p ) );
    std::cout << j.dump( 2 ) << "\n";
  }
  else
  {
    for ( auto const& p : outs )
      std::cout << render_path( g, p ) << "\n";
    if ( outs.empty() )
      std::cout << "(none)\n";
  }
  return ok;
}

int run_fmt( Options const& o )
{
  std::string text;
  if ( o.fmt_game.empty() )
    text = render_game( load( o.input ) );
  else
  {
    auto const g = load( o.fmt_game );
    text = render_formula( parse_formula( o.input, g ), g ) + "\n";
  }
  if ( o.json )
    std::cout << Json( { { "text", text } } ).dump( 2 ) << "\n";
  else
    std::cout << text;
  return ok;
}

int run_gen( Options const& o )
{
  auto const text = render_game( generate_random_game( o.gen ) );
  if ( o.json )
    std::cout << Json( { { "text", text } } ).dump( 2 ) << "\n";
  else
    std::cout << text;
  return ok;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Bounded model checker for capacity ATL over unknown-profile game structures" };
  app.require_subcommand( 1 );
  app.fallthrough();
  Options o;
  app.add_flag( "--json", o.json, "Emit one machine-readable JSON document" );

  auto* validate = app.add_subcommand( "validate", "Parse, bind and validate a game file" );
  validate->add_option( "game", o.game, "Game file" )->required();

  auto* check = app.add_subcommand( "check", "Evaluate a formula at a state" );
  check->add_option( "game", o.game, "Game file" )->required();
  check->add_option( "-f,--formula", o.formula, "Formula text" )->required();
  check->add_option( "-s,--state", o.state, "State (default: the game's init)" );
  check->add_option( "-k,--horizon", o.horizon, "Horizon" )->check( CLI::NonNegativeNumber );

  auto* compat = app.add_subcommand( "compat", "Capacity assignments compatible with a path" );
  compat->add_option( "game", o.game, "Game file" )->required();
  compat->add_option( "-p,--path", o.path, "Path, e.g. \"s0 (watch,swingL) s1\"" )->required();

  auto* classes = app.add_subcommand( "classes", "Paths an agent cannot tell apart from a path" );
  classes->add_option( "game", o.game, "Game file" )->required();
  classes->add_option( "-p,--path", o.path, "Path" )->required();
  classes->add_option( "-a,--agent", o.agent, "Agent" )->required();

  auto* outcomes = app.add_subcommand( "outcomes", "Bounded outcomes of a strategy from a path" );
  outcomes->add_option( "game", o.game, "Game file" )->required();
  outcomes->add_option( "-p,--path", o.path, "Path" )->required();
  outcomes->add_option( "--strategy", o.strategy, "Strategy JSON file" )->required();
  outcomes->add_option( "-k,--horizon", o.horizon, "Horizon" )->check( CLI::NonNegativeNumber );

  auto* fmt = app.add_subcommand( "fmt", "Canonical rendering of a game file, or of a formula with -g" );
  fmt->add_option( "input", o.input, "Game file, or formula text when -g is given" )->required();
  fmt->add_option( "-g,--game", o.fmt_game, "Game file resolving the formula's names" );

  auto* gen = app.add_subcommand( "gen", "Emit a random valid game" );
  gen->add_option( "--seed", o.gen.seed, "Seed" )->required();
  gen->add_option( "--states", o.gen.states, "State count" )->check( CLI::Range( 1, 5 ) );
  gen->add_option( "--agents", o.gen.agents, "Agent count" )->check( CLI::Range( 1, 3 ) );
  gen->add_option( "--capacities", o.gen.capacities, "Capacities per agent" )->check( CLI::Range( 1, 2 ) );
  gen->add_option( "--actions", o.gen.actions_per_capacity, "Actions per capacity at most" )->check( CLI::Range( 1, 2 ) );
  gen->add_option( "--label-density", o.gen.label_density, "Chance a state carries a proposition" )
      ->check( CLI::Range( 0.0, 1.0 ) );
  gen->add_option( "--props", o.gen.props, "Proposition count" );
  gen->add_option( "--protocol-density", o.gen.protocol_density, "Chance of offering each extra action" )
      ->check( CLI::Range( 0.0, 1.0 ) );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e );
    return usage;
  }

  try
  {
    if ( validate->parsed() )
      return run_validate( o );
    if ( check->parsed() )
      return run_check( o );
    if ( compat->parsed() )
      return run_compat( o );
    if ( classes->parsed() )
      return run_classes( o );
    if ( outcomes->parsed() )
      return run_outcomes( o );
    if ( fmt->parsed() )
      return run_fmt( o );
    return run_gen( o );
  }
  catch ( UsageError const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
  catch ( BindError const& e )
  {
    for ( auto const& d : e.diagnostics() )
      std::cerr << d.message << "\n";
    return bad_input;
  }
  catch ( Error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return bad_input;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
}
