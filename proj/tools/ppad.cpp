// ppad: generate, reduce, solve, verify and render total-search instances
// and games. Data goes to stdout, diagnostics to stderr.
//
// Exit status: 0 success, 1 verification rejected, 2 usage or input error.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppad/brouwer_dbf.hpp"
#include "ppad/circuit.hpp"
#include "ppad/games.hpp"
#include "ppad/reductions.hpp"
#include "ppad/solvers.hpp"
#include "ppad/sperner.hpp"
#include "ppad/total_search.hpp"

namespace {

using namespace ppad;

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

struct InputError : Error {
  using Error::Error;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_word(const std::string& text) {
  std::istringstream in(text);
  LineReader reader(in);
  auto line = reader.next();
  if (!line) return {};
  auto tokens = split_ws(*line);
  return tokens.empty() ? std::string() : std::string(tokens[0]);
}

BimatrixGame read_bimatrix(const std::string& path) {
  return BimatrixGame::from_normal_form(parse_game(read_input(path)));
}

EolSolution parse_eol_answer(const std::string& text) {
  std::istringstream in(text);
  LineReader reader(in);
  auto line = reader.next();
  if (!line) reader.fail("empty solution; expected '[SINK|SOURCE] <bits>'");
  auto tokens = split_ws(*line);
  std::string_view bits = tokens.back();
  if (tokens.size() > 2 || (tokens.size() == 2 && tokens[0] != "SINK" && tokens[0] != "SOURCE")) {
    reader.fail("expected '[SINK|SOURCE] <bits>'");
  }
  try {
    return {BitString::parse(bits), tokens.size() == 2 && tokens[0] == "SOURCE" ? SolutionKind::Source
                                                                                  : SolutionKind::Sink};
  } catch (const FormatError& e) {
    reader.fail(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ppad: End-of-line, Sperner, Brouwer and Nash toolkit"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads for exhaustive scans")->check(CLI::Range(1U, 256U));

  std::vector<std::pair<CLI::App*, std::function<int()>>> actions;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::function<int()> run) {
    CLI::App* cmd = parent->add_subcommand(name, help);
    actions.emplace_back(cmd, std::move(run));
    return cmd;
  };

  std::string input;
  std::uint64_t seed = 1;
  std::size_t n = 6, lines = 1, max_edges = 0, m = 4;
  bool all = false;

  // gen
  CLI::App* gen = app.add_subcommand("gen", "generate a random instance")->require_subcommand(1);
  auto add_eol_gen_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n", n, "vertex bit width")->check(CLI::Range(1, 12));
    cmd->add_option("--lines", lines, "number of vertex-disjoint lines");
    cmd->add_option("--max-edges", max_edges, "cap on each line's length (0 = none)");
    cmd->add_option("--seed", seed, "random seed");
  };
  add_eol_gen_flags(leaf(gen, "eol", "random End-of-line instance", [&] {
    std::cout << serialize_eol(random_eol_instance(n, lines, seed, max_edges));
    return kOk;
  }));
  {
    auto* cmd = leaf(gen, "sperner", "random Sperner colouring", [&] {
      std::cout << serialize_sperner(random_sperner_instance(m, seed));
      return kOk;
    });
    cmd->add_option("--m", m, "grid has 2^m+1 vertices per side")->check(CLI::Range(1, 10));
    cmd->add_option("--seed", seed, "random seed");
  }
  add_eol_gen_flags(leaf(gen, "dbf", "random End-of-line instance encoded as a DBF", [&] {
    auto inst = random_eol_instance(n, lines, seed, max_edges);
    std::ostringstream source;
    source << "random n=" << n << " lines=" << lines << " seed=" << seed << " max-edges=" << max_edges;
    std::cout << serialize_dbf(eol_to_dbf(inst, source.str()));
    return kOk;
  }));

  // solve
  CLI::App* solve = app.add_subcommand("solve", "solve an instance or game")->require_subcommand(1);
  {
    auto* cmd = leaf(solve, "eol", "follow the line from 0^n (or list every solution)", [&] {
      auto inst = parse_eol(read_input(input));
      if (all) {
        for (const auto& s : brute_force_eol(inst, threads)) std::cout << serialize_eol_solution(s);
      } else {
        std::cout << serialize_eol_solution(follow_line(inst));
      }
      return kOk;
    });
    cmd->add_option("file", input, "instance file (default stdin)");
    cmd->add_flag("--all", all, "list every solution by exhaustive scan");
  }
  {
    auto* cmd = leaf(solve, "sperner", "walk to a trichromatic triangle (or list all)", [&] {
      auto grid = parse_sperner(read_input(input));
      if (all) {
        for (const auto& t : brute_force_trichromatic(grid, threads)) std::cout << "TRICHROMATIC " << to_string(t) << '\n';
      } else {
        std::cout << "TRICHROMATIC " << to_string(find_trichromatic_walk(grid)) << '\n';
      }
      return kOk;
    });
    cmd->add_option("file", input, "instance file (default stdin)");
    cmd->add_flag("--all", all, "list every trichromatic triangle");
  }
  {
    auto* cmd = leaf(solve, "dbf", "list panchromatic points, decoded when provenance is present", [&] {
      auto dbf = parse_dbf(read_input(input));
      for (const auto& p : find_panchromatic(dbf, threads)) {
        std::cout << "PANCHROMATIC " << p.x << ' ' << p.y;
        if (dbf.provenance()) std::cout << ' ' << decode_solution(dbf, p).to_string();
        std::cout << '\n';
      }
      return kOk;
    });
    cmd->add_option("file", input, "DBF file (default stdin)");
  }
  std::size_t drop = 1;
  bool no_lex = false;
  {
    auto* cmd = leaf(solve, "lh", "Lemke-Howson from the artificial equilibrium", [&] {
      auto g = read_bimatrix(input);
      if (drop < 1 || drop > g.rows() + g.cols()) {
        throw InputError("--drop must be in 1.." + std::to_string(g.rows() + g.cols()));
      }
      LemkeHowsonOptions options;
      options.lexicographic = !no_lex;
      std::cout << serialize_profile(lemke_howson(g, drop - 1, options).profile);
      return kOk;
    });
    cmd->add_option("file", input, "game file (default stdin)");
    cmd->add_option("--drop", drop, "label to drop, 1-based (rows first, then columns)");
    cmd->add_flag("--no-lex", no_lex, "disable lexicographic tie-breaking (fail on degeneracy)");
  }
  {
    auto* cmd = leaf(solve, "supenum", "all equilibria by support enumeration", [&] {
      for (const auto& p : support_enumeration(read_bimatrix(input))) std::cout << serialize_profile(p);
      return kOk;
    });
    cmd->add_option("file", input, "game file (default stdin)");
  }
  std::optional<std::uint64_t> approx_seed;
  {
    auto* cmd = leaf(solve, "approx", "staged 1-1/k approximation on the [0,1]-rescaled game", [&] {
      auto result = approx_nash(parse_game(read_input(input)), approx_seed);
      std::cout << "# guarantee " << format_rational(result.guarantee) << " on the [0,1]-rescaled game\n"
                << serialize_profile(result.profile);
      return kOk;
    });
    cmd->add_option("file", input, "game file (default stdin)");
    cmd->add_option("--seed", approx_seed, "pick the committed actions at random with this seed");
  }

  // reduce
  CLI::App* reduce = app.add_subcommand("reduce", "apply a reduction")->require_subcommand(1);
  leaf(reduce, "sperner-to-eol", "triangles become vertices, crossings become arcs", [&] {
    std::cout << serialize_eol(sperner_to_eol(parse_sperner(read_input(input))).instance());
    return kOk;
  })->add_option("file", input, "Sperner file (default stdin)");
  leaf(reduce, "eol-to-dbf", "draw the graph as red/yellow strips", [&] {
    const std::string source = input.empty() || input == "-" ? "stdin" : input;
    std::cout << serialize_dbf(eol_to_dbf(parse_eol(read_input(input)), source));
    return kOk;
  })->add_option("file", input, "End-of-line file (default stdin)");
  leaf(reduce, "symmetrize", "symmetric 2n x 2n game [[0, G], [G^T, 0]]", [&] {
    auto [sym, cert] = symmetrize(read_bimatrix(input));
    std::cout << "# shift " << format_rational(cert.shift) << '\n' << serialize_game(sym);
    return kOk;
  })->add_option("file", input, "square game file (default stdin)");

  // verify
  CLI::App* verify = app.add_subcommand("verify", "check a claimed solution")->require_subcommand(1);
  std::string second;
  {
    auto* cmd = leaf(verify, "eol", "check an End-of-line solution", [&] {
      auto inst = parse_eol(read_input(input));
      auto claim = parse_eol_answer(read_input(second));
      if (auto ok = verify_eol_solution(inst, claim.x)) {
        std::cout << "ACCEPT " << serialize_eol_solution(*ok);
        return kOk;
      }
      std::cout << "REJECT " << claim.x.to_string() << '\n';
      return kRejected;
    });
    cmd->add_option("instance", input, "instance file")->required();
    cmd->add_option("solution", second, "solution file (default stdin)");
  }
  std::string eps_text = "0";
  {
    auto* cmd = leaf(verify, "nash", "check an (eps-)Nash equilibrium exactly", [&] {
      Rational eps;
      try {
        eps = parse_rational(eps_text);
      } catch (const Error& e) {
        throw InputError(std::string("--eps: ") + e.what());
      }
      if (eps < 0) throw InputError("--eps must be non-negative");
      auto g = parse_game(read_input(input));
      auto prof = parse_profile(read_input(second));
      auto verdict = verify_nash(g, prof, eps);
      std::cout << (verdict.accepted ? "ACCEPT" : "REJECT") << " max_violation "
                << format_rational(verdict.max_violation) << '\n';
      return verdict.accepted ? kOk : kRejected;
    });
    cmd->add_option("game", input, "game file")->required();
    cmd->add_option("profile", second, "profile file (default stdin)");
    cmd->add_option("--eps", eps_text, "tolerance as an exact rational, e.g. 1/2");
  }

  // fixture
  std::string fixture;
  std::size_t gmp_n = 3;
  {
    auto* cmd = leaf(&app, "fixture", "print an example game", [&] {
      if (fixture == "rps") {
        std::cout << serialize_game(fixture_rps());
      } else if (fixture == "stag-hunt") {
        std::cout << serialize_game(fixture_stag_hunt());
      } else if (fixture == "gmp") {
        std::cout << serialize_game(fixture_gmp(gmp_n));
      } else {
        std::cout << serialize_game(fixture_matching_pennies());
      }
      return kOk;
    });
    cmd->add_option("name", fixture, "rps | stag-hunt | gmp | matching-pennies")
        ->required()
        ->check(CLI::IsMember({"rps", "stag-hunt", "gmp", "matching-pennies"}));
    cmd->add_option("--n", gmp_n, "size of generalised matching pennies")->check(CLI::Range(2, 64));
  }

  // render
  std::string ppm;
  {
    auto* cmd = leaf(&app, "render", "write a Sperner or DBF colouring as binary PPM", [&] {
      const std::string text = read_input(input);
      const std::string kind = first_word(text);
      std::optional<ColouredGrid> grid;
      if (kind == "SPERNER") {
        grid.emplace(parse_sperner(text));
      } else if (kind == "DBF") {
        grid.emplace(parse_dbf(text).grid());
      } else {
        throw InputError("render expects a SPERNER or DBF file");
      }
      std::ofstream out(ppm, std::ios::binary);
      if (!out) throw InputError("cannot write '" + ppm + "'");
      write_ppm(*grid, out);
      return kOk;
    });
    cmd->add_option("file", input, "SPERNER or DBF file (default stdin)");
    cmd->add_option("--ppm", ppm, "output image")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? kOk : kUsage;
  }
  try {
    for (auto& [cmd, run] : actions) {
      if (cmd->parsed()) return run();
    }
  } catch (const std::exception& e) {
    std::cerr << "ppad: error: " << e.what() << '\n';
    return kUsage;
  }
  std::cerr << "ppad: error: no command given\n";
  return kUsage;
}
