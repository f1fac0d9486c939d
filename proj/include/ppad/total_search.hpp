#pragma once

// End-of-line instances: a successor circuit S and a predecessor circuit P on
// n-bit vertex labels. The arc v -> w exists exactly when S(v) = w and
// P(w) = v, so every vertex has in- and out-degree at most one. The instance
// promises P(0^n) = 0^n != S(0^n); a solution is any x with P(S(x)) != x
// (a sink) or with S(P(x)) != x and x != 0^n (a source).

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ppad/circuit.hpp"
#include "ppad/error.hpp"
#include "ppad/random.hpp"
#include "ppad/text_io.hpp"

namespace ppad {

class EndOfLineInstance {
 public:
  EndOfLineInstance(BooleanCircuit successor, BooleanCircuit predecessor)
      : successor_(std::move(successor)), predecessor_(std::move(predecessor)) {
    const std::size_t n = successor_.input_width();
    if (n == 0 || n > 64) throw ValidityError("vertex width must be in 1..64");
    if (successor_.output_width() != n || predecessor_.input_width() != n ||
        predecessor_.output_width() != n) {
      throw ValidityError("S and P must both map " + std::to_string(n) + " bits to " +
                          std::to_string(n) + " bits");
    }
    const BitString origin = BitString::zeros(n);
    if (predecessor_.evaluate(origin) != origin) throw ValidityError("P(0^n) must equal 0^n");
    if (successor_.evaluate(origin) == origin) throw ValidityError("S(0^n) must differ from 0^n");
  }

  std::size_t n() const noexcept { return successor_.input_width(); }
  const BooleanCircuit& successor() const noexcept { return successor_; }
  const BooleanCircuit& predecessor() const noexcept { return predecessor_; }

  BitString successor_of(const BitString& v) const { return successor_.evaluate(v); }
  BitString predecessor_of(const BitString& v) const { return predecessor_.evaluate(v); }

 private:
  BooleanCircuit successor_;
  BooleanCircuit predecessor_;
};

enum class SolutionKind { Sink, Source };

inline const char* to_string(SolutionKind kind) {
  return kind == SolutionKind::Sink ? "SINK" : "SOURCE";
}

struct EolSolution {
  BitString x;
  SolutionKind kind;

  friend bool operator==(const EolSolution&, const EolSolution&) = default;
};

/// Accepts x when P(S(x)) != x, or when S(P(x)) != x and x != 0^n. The sink
/// condition is reported when both hold.
inline std::optional<EolSolution> verify_eol_solution(const EndOfLineInstance& inst,
                                                      const BitString& x) {
  if (x.width() != inst.n()) {
    throw ShapeError("candidate has width " + std::to_string(x.width()) + ", instance has n=" +
                     std::to_string(inst.n()));
  }
  if (inst.predecessor_of(inst.successor_of(x)) != x) return EolSolution{x, SolutionKind::Sink};
  if (!x.is_zero() && inst.successor_of(inst.predecessor_of(x)) != x) {
    return EolSolution{x, SolutionKind::Source};
  }
  return std::nullopt;
}

/// Walks x <- S(x) from 0^n while the arc x -> S(x) exists, returning the
/// sink at the other end of the origin's line. Budget: 2^n + 1 steps.
inline EolSolution follow_line(const EndOfLineInstance& inst) {
  const std::size_t n = inst.n();
  const std::uint64_t budget = n >= 63 ? UINT64_MAX : (std::uint64_t{1} << n) + 1;
  BitString x = BitString::zeros(n);
  for (std::uint64_t steps = 0;; ++steps) {
    BitString next = inst.successor_of(x);
    if (inst.predecessor_of(next) != x) return EolSolution{std::move(x), SolutionKind::Sink};
    if (steps >= budget) {
      throw BudgetExceeded("follow_line: walk from 0^n did not terminate; instance is malformed",
                           steps);
    }
    x = std::move(next);
  }
}

/// Successor and predecessor functions in explicit table form (n <= 20).
struct EolTables {
  std::size_t n = 0;
  std::vector<std::uint64_t> successor;
  std::vector<std::uint64_t> predecessor;

  bool has_out_arc(std::uint64_t v) const { return predecessor[successor[v]] == v; }
  bool has_in_arc(std::uint64_t v) const { return successor[predecessor[v]] == v; }
  bool self_fixed(std::uint64_t v) const { return successor[v] == v && predecessor[v] == v; }
};

inline EolTables tabulate_eol(const EndOfLineInstance& inst, unsigned threads = 1) {
  return EolTables{inst.n(), inst.successor().tabulate(threads), inst.predecessor().tabulate(threads)};
}

/// Every solution of the instance in lexicographic order (n <= 20).
inline std::vector<EolSolution> brute_force_eol(const EndOfLineInstance& inst, unsigned threads = 1) {
  if (inst.n() > 20) {
    throw CapExceeded("brute_force_eol: n=" + std::to_string(inst.n()) + " exceeds cap 20");
  }
  const EolTables t = tabulate_eol(inst, threads);
  std::vector<EolSolution> out;
  for (std::uint64_t x = 0; x < t.successor.size(); ++x) {
    if (!t.has_out_arc(x)) {
      out.push_back({BitString::from_uint(x, t.n), SolutionKind::Sink});
    } else if (x != 0 && !t.has_in_arc(x)) {
      out.push_back({BitString::from_uint(x, t.n), SolutionKind::Source});
    }
  }
  return out;
}

struct ParityReport {
  std::uint64_t odd_vertices = 0;
  bool even() const noexcept { return odd_vertices % 2 == 0; }
};

/// Counts vertices whose total degree (in + out, a self-loop counting once
/// each way) is odd. n <= 16.
inline ParityReport degree_parity_check(const EndOfLineInstance& inst) {
  if (inst.n() > 16) {
    throw CapExceeded("degree_parity_check: n=" + std::to_string(inst.n()) + " exceeds cap 16");
  }
  const EolTables t = tabulate_eol(inst);
  ParityReport report;
  for (std::uint64_t v = 0; v < t.successor.size(); ++v) {
    const int degree = (t.has_out_arc(v) ? 1 : 0) + (t.has_in_arc(v) ? 1 : 0);
    if (degree % 2 == 1) ++report.odd_vertices;
  }
  return report;
}

/// Compiles explicit successor/predecessor tables (each of length 2^n).
inline EndOfLineInstance make_eol_instance(std::size_t n, std::span<const std::uint64_t> successor,
                                           std::span<const std::uint64_t> predecessor) {
  return EndOfLineInstance(compile_truth_table(n, n, successor), compile_truth_table(n, n, predecessor));
}

/// Instance whose arcs are the consecutive pairs of each path; every vertex not
/// on a path is self-fixed. Paths must be vertex-disjoint.
inline EndOfLineInstance make_eol_from_paths(std::size_t n,
                                             const std::vector<std::vector<std::uint64_t>>& paths) {
  if (n == 0 || n > BooleanCircuit::kMaxTableWidth) {
    throw CapExceeded("explicit instances need 1 <= n <= 20");
  }
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> succ(size), pred(size);
  std::vector<bool> used(size, false);
  for (std::uint64_t v = 0; v < size; ++v) succ[v] = pred[v] = v;
  for (const auto& path : paths) {
    for (auto v : path) {
      if (v >= size) throw ShapeError("path vertex " + std::to_string(v) + " out of range");
      if (used[v]) throw ShapeError("paths are not vertex-disjoint at " + std::to_string(v));
      used[v] = true;
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      succ[path[i]] = path[i + 1];
      pred[path[i + 1]] = path[i];
    }
  }
  return make_eol_instance(n, succ, pred);
}

/// Vertex-disjoint simple paths, the first starting at 0^n; everything else
/// self-fixed. `max_edges` (0 = no limit) bounds each path's length.
/// Deterministic in `seed`. n <= 12.
inline std::vector<std::vector<std::uint64_t>> random_eol_paths(std::size_t n, std::size_t lines,
                                                                std::uint64_t seed,
                                                                std::size_t max_edges = 0) {
  if (n == 0 || n > 12) throw CapExceeded("random_eol_instance: n must be in 1..12");
  if (lines == 0) throw ShapeError("random_eol_instance: need at least one line");
  const std::uint64_t available = (std::uint64_t{1} << n) - 1;  // non-origin vertices
  if (2 * lines - 1 > available) {
    throw ShapeError("random_eol_instance: n=" + std::to_string(n) + " cannot host " +
                     std::to_string(lines) + " disjoint lines");
  }
  Rng rng(seed);
  std::vector<std::uint64_t> pool(available);
  for (std::uint64_t v = 0; v < available; ++v) pool[v] = v + 1;
  shuffle(pool, rng);

  std::vector<std::vector<std::uint64_t>> paths;
  std::uint64_t used = 0;
  const std::uint64_t fair = std::max<std::uint64_t>(1, available / lines - 1);
  for (std::size_t i = 0; i < lines; ++i) {
    const std::uint64_t reserve = 2 * (lines - 1 - i);
    const std::uint64_t extra_vertex = i == 0 ? 0 : 1;
    std::uint64_t upper = std::min(fair, available - used - reserve - extra_vertex);
    if (max_edges > 0) upper = std::min<std::uint64_t>(upper, max_edges);
    upper = std::max<std::uint64_t>(upper, 1);
    const std::uint64_t edges = 1 + uniform_below(rng, upper);
    std::vector<std::uint64_t> path;
    if (i == 0) path.push_back(0);
    while (path.size() < edges + 1) path.push_back(pool[used++]);
    paths.push_back(std::move(path));
  }
  return paths;
}

inline EndOfLineInstance random_eol_instance(std::size_t n, std::size_t lines, std::uint64_t seed,
                                             std::size_t max_edges = 0) {
  return make_eol_from_paths(n, random_eol_paths(n, lines, seed, max_edges));
}

// ---------------------------------------------------------------------------
// Instance file: `EOL n=<n>`, the S netlist, a `---` line, the P netlist.

inline std::string serialize_eol(const EndOfLineInstance& inst) {
  return "EOL n=" + std::to_string(inst.n()) + "\n" + serialize_circuit(inst.successor()) +
         "---\n" + serialize_circuit(inst.predecessor());
}

inline EndOfLineInstance read_eol(LineReader& reader) {
  auto header = reader.next();
  if (!header) reader.fail("empty input; expected 'EOL n=<n>'");
  const auto tokens = split_ws(*header);
  std::optional<std::uint64_t> n;
  if (tokens.size() != 2 || tokens[0] != "EOL" || !(n = parse_keyed_uint(tokens[1], "n"))) {
    reader.fail("expected header 'EOL n=<n>'");
  }
  BooleanCircuit s = read_circuit(reader);
  auto sep = reader.next();
  if (!sep || *sep != "---") reader.fail("expected '---' between the S and P netlists");
  BooleanCircuit p = read_circuit(reader);
  if (s.input_width() != *n || p.input_width() != *n) {
    reader.fail("netlist input widths do not match n=" + std::to_string(*n));
  }
  try {
    return EndOfLineInstance(std::move(s), std::move(p));
  } catch (const ValidityError& e) {
    reader.fail(e.what());
  }
}

inline EndOfLineInstance parse_eol(std::istream& in) {
  LineReader reader(in);
  EndOfLineInstance inst = read_eol(reader);
  if (reader.next()) reader.fail("unexpected content after the P netlist");
  return inst;
}

inline EndOfLineInstance parse_eol(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_eol(in);
}

/// Solution line: `<SINK|SOURCE> <bits>`.
inline std::string serialize_eol_solution(const EolSolution& s) {
  return std::string(to_string(s.kind)) + " " + s.x.to_string() + "\n";
}

}  // namespace ppad
