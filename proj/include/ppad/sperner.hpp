#pragma once

// Two-dimensional Sperner instances on the (2^m+1) x (2^m+1) vertex grid.
//
// A colour circuit maps interior coordinates (x then y, m bits each) to a
// 2-bit colour code. Boundary vertices are forced by an overriding mask:
//   x = 0                         -> red    (0)
//   y = 0, x > 0                  -> yellow (1)
//   x, y > 0 and x or y = 2^m     -> black  (2)
// so the only exterior red/yellow edge is (0,0)-(1,0).
//
// Each unit cell is split by its lower-left to upper-right diagonal into a
// LOWER triangle (x,y),(x+1,y),(x+1,y+1) and an UPPER triangle
// (x,y),(x+1,y+1),(x,y+1).

#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ppad/circuit.hpp"
#include "ppad/error.hpp"
#include "ppad/random.hpp"
#include "ppad/text_io.hpp"
#include "ppad/total_search.hpp"

namespace ppad {

enum class Colour : std::uint8_t { Red = 0, Yellow = 1, Black = 2 };

inline Colour colour_from_code(std::uint64_t code) {
  // Code 3 is unused and remaps to black.
  return code >= 2 ? Colour::Black : static_cast<Colour>(code);
}

struct GridPoint {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

/// Vertex-coloured grid driven by a circuit plus the boundary mask. This is
/// the shared representation of Sperner instances and discrete Brouwer
/// functions.
class ColouredGrid {
 public:
  static constexpr std::size_t kMaxTabulatedM = 10;

  ColouredGrid(std::size_t m, BooleanCircuit colour_circuit, bool boundary_mask = true)
      : m_(m), circuit_(std::move(colour_circuit)), mask_(boundary_mask) {
    if (m_ == 0 || m_ > 30) throw ShapeError("grid exponent m must be in 1..30");
    if (circuit_.input_width() != 2 * m_ || circuit_.output_width() != 2) {
      throw ShapeError("colour circuit must map " + std::to_string(2 * m_) + " bits to 2 bits");
    }
  }

  std::size_t m() const noexcept { return m_; }
  /// Vertices per side, 2^m + 1.
  std::uint32_t side() const noexcept { return (std::uint32_t{1} << m_) + 1; }
  const BooleanCircuit& circuit() const noexcept { return circuit_; }
  bool boundary_masked() const noexcept { return mask_; }

  /// The colour the boundary rule forces at (x, y), or nullopt for interior vertices.
  static std::optional<Colour> forced_colour(std::uint32_t x, std::uint32_t y, std::uint32_t side) {
    if (x == 0) return Colour::Red;
    if (y == 0) return Colour::Yellow;
    if (x == side - 1 || y == side - 1) return Colour::Black;
    return std::nullopt;
  }

  Colour colour_of(std::uint32_t x, std::uint32_t y) const {
    check_range(x, y);
    if (mask_) {
      if (auto forced = forced_colour(x, y, side())) return *forced;
    }
    return raw_colour(x, y);
  }

  /// Colours of every vertex, row-major (index y * side + x). m <= 10.
  std::vector<Colour> colour_table(unsigned threads = 1) const {
    if (m_ > kMaxTabulatedM) {
      throw CapExceeded("colour_table: m=" + std::to_string(m_) + " exceeds cap " +
                        std::to_string(kMaxTabulatedM));
    }
    const std::vector<std::uint64_t> codes = circuit_.tabulate(threads);
    const std::uint32_t s = side(), top = s - 2;
    std::vector<Colour> table(std::size_t{s} * s);
    for (std::uint32_t y = 0; y < s; ++y) {
      for (std::uint32_t x = 0; x < s; ++x) {
        std::optional<Colour> forced = mask_ ? forced_colour(x, y, s) : std::nullopt;
        const std::uint64_t key = (std::uint64_t{std::min(x, top)} << m_) | std::min(y, top);
        table[std::size_t{y} * s + x] = forced ? *forced : colour_from_code(codes[key]);
      }
    }
    return table;
  }

 private:
  void check_range(std::uint32_t x, std::uint32_t y) const {
    if (x >= side() || y >= side()) {
      throw ShapeError("coordinate (" + std::to_string(x) + "," + std::to_string(y) +
                       ") outside the " + std::to_string(side()) + "x" + std::to_string(side()) +
                       " grid");
    }
  }

  // Coordinates 2^m are not representable in m bits; the unmasked colouring
  // clamps them to 2^m - 1.
  Colour raw_colour(std::uint32_t x, std::uint32_t y) const {
    const std::uint32_t top = side() - 2;
    const std::uint64_t key = (std::uint64_t{std::min(x, top)} << m_) | std::min(y, top);
    return colour_from_code(circuit_.evaluate_uint(key));
  }

  std::size_t m_;
  BooleanCircuit circuit_;
  bool mask_;
};

using SpernerInstance = ColouredGrid;

/// Builds a grid from a colouring of the interior. `interior(x, y)` is only
/// consulted for 1 <= x, y <= 2^m - 1. m <= 10.
inline ColouredGrid make_coloured_grid(std::size_t m,
                                       const std::function<Colour(std::uint32_t, std::uint32_t)>& interior) {
  if (m == 0 || m > ColouredGrid::kMaxTabulatedM) {
    throw CapExceeded("explicit colourings need 1 <= m <= 10");
  }
  const std::uint32_t span = std::uint32_t{1} << m;
  std::vector<std::uint64_t> codes(std::size_t{span} * span);
  for (std::uint32_t x = 0; x < span; ++x) {
    for (std::uint32_t y = 0; y < span; ++y) {
      auto forced = ColouredGrid::forced_colour(x, y, span + 1);
      codes[(std::size_t{x} << m) | y] = static_cast<std::uint64_t>(forced ? *forced : interior(x, y));
    }
  }
  return ColouredGrid(m, compile_truth_table(2 * m, 2, codes));
}

inline ColouredGrid uniform_interior(std::size_t m, Colour c) {
  return make_coloured_grid(m, [c](std::uint32_t, std::uint32_t) { return c; });
}

/// Interior colours drawn uniformly from {red, yellow, black}.
inline ColouredGrid random_sperner_instance(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  const std::uint32_t span = std::uint32_t{1} << m;
  std::vector<Colour> colours(std::size_t{span} * span);
  for (auto& c : colours) c = static_cast<Colour>(uniform_below(rng, 3));
  return make_coloured_grid(m, [&](std::uint32_t x, std::uint32_t y) {
    return colours[std::size_t{y} * span + x];
  });
}

// ---------------------------------------------------------------------------
// Triangles

enum class Half : std::uint8_t { Lower = 0, Upper = 1 };

struct TriangleRef {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  Half half = Half::Lower;

  /// Vertices in counter-clockwise order.
  std::array<GridPoint, 3> vertices() const {
    if (half == Half::Lower) return {{{x, y}, {x + 1, y}, {x + 1, y + 1}}};
    return {{{x, y}, {x + 1, y + 1}, {x, y + 1}}};
  }

  friend auto operator<=>(const TriangleRef&, const TriangleRef&) = default;
};

inline std::string to_string(const TriangleRef& t) {
  return std::string(t.half == Half::Lower ? "LOWER " : "UPPER ") + std::to_string(t.x) + " " +
         std::to_string(t.y);
}

namespace detail {

/// Triangle across counter-clockwise edge `e` (from vertex e to vertex e+1),
/// or nullopt when that edge lies on the grid boundary. `cells` = side - 1.
inline std::optional<TriangleRef> neighbour_across(const TriangleRef& t, int e, std::uint32_t cells) {
  const std::uint32_t x = t.x, y = t.y;
  if (t.half == Half::Lower) {
    switch (e) {
      case 0:
        if (y == 0) return std::nullopt;
        return TriangleRef{x, y - 1, Half::Upper};
      case 1:
        if (x + 1 >= cells) return std::nullopt;
        return TriangleRef{x + 1, y, Half::Upper};
      default:
        return TriangleRef{x, y, Half::Upper};
    }
  }
  switch (e) {
    case 0:
      return TriangleRef{x, y, Half::Lower};
    case 1:
      if (y + 1 >= cells) return std::nullopt;
      return TriangleRef{x, y + 1, Half::Lower};
    default:
      if (x == 0) return std::nullopt;
      return TriangleRef{x - 1, y, Half::Lower};
  }
}

/// Orientation of the red/yellow edges of one triangle. An edge is crossed
/// outward when, walking out, red is on the left: for a counter-clockwise
/// edge (a -> b) that means colour(a) = yellow and colour(b) = red.
struct CrossingEdges {
  int in = -1;
  int out = -1;
  bool trichromatic = false;
};

inline CrossingEdges crossing_edges(const std::array<Colour, 3>& c) {
  CrossingEdges r;
  r.trichromatic = c[0] != c[1] && c[1] != c[2] && c[0] != c[2];
  for (int e = 0; e < 3; ++e) {
    const Colour a = c[e], b = c[(e + 1) % 3];
    if (a == Colour::Red && b == Colour::Yellow) r.in = e;
    if (a == Colour::Yellow && b == Colour::Red) r.out = e;
  }
  return r;
}

}  // namespace detail

struct BoundaryReport {
  bool exhaustive = true;
  std::vector<GridPoint> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks the three boundary clauses against colour_of on the boundary
/// vertices: every vertex when m <= 12, a deterministic sample otherwise.
inline BoundaryReport validate_boundary(const ColouredGrid& grid) {
  BoundaryReport report;
  const std::uint32_t s = grid.side();
  const std::uint64_t perimeter = 4ull * (s - 1);
  report.exhaustive = grid.m() <= 12;
  const std::uint64_t stride = report.exhaustive ? 1 : std::max<std::uint64_t>(1, perimeter / 4096);
  auto point_at = [s](std::uint64_t k) -> GridPoint {
    const std::uint32_t edge = static_cast<std::uint32_t>(k / (s - 1));
    const std::uint32_t off = static_cast<std::uint32_t>(k % (s - 1));
    switch (edge) {
      case 0:
        return {off, 0};
      case 1:
        return {s - 1, off};
      case 2:
        return {s - 1 - off, s - 1};
      default:
        return {0, s - 1 - off};
    }
  };
  auto check = [&](GridPoint p) {
    if (grid.colour_of(p.x, p.y) != *ColouredGrid::forced_colour(p.x, p.y, s)) {
      report.violations.push_back(p);
    }
  };
  for (std::uint64_t k = 0; k < perimeter; k += stride) check(point_at(k));
  if (!report.exhaustive) {
    for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{s - 2}, std::uint64_t{s - 1}}) check(point_at(k));
  }
  return report;
}

/// Follows red/yellow edges from the exterior edge (0,0)-(1,0), keeping red
/// on the left, until a trichromatic triangle is reached. Budget 2(N-1)^2.
inline TriangleRef find_trichromatic_walk(const ColouredGrid& grid) {
  const std::uint32_t cells = grid.side() - 1;
  const std::uint64_t budget = 2ull * cells * cells;
  TriangleRef t{0, 0, Half::Lower};
  for (std::uint64_t steps = 0; steps <= budget; ++steps) {
    const auto v = t.vertices();
    const std::array<Colour, 3> c{grid.colour_of(v[0].x, v[0].y), grid.colour_of(v[1].x, v[1].y),
                                  grid.colour_of(v[2].x, v[2].y)};
    const auto edges = detail::crossing_edges(c);
    if (edges.trichromatic) return t;
    if (edges.out < 0) {
      throw ValidityError("sperner walk: triangle " + to_string(t) +
                          " has no outgoing red/yellow edge; colouring is corrupt");
    }
    auto next = detail::neighbour_across(t, edges.out, cells);
    if (!next) {
      throw ValidityError("sperner walk left the grid at " + to_string(t) +
                          "; boundary colouring is corrupt");
    }
    t = *next;
  }
  throw BudgetExceeded("sperner walk exceeded its step budget", budget);
}

/// All trichromatic triangles in row-major order (LOWER before UPPER). m <= 10.
inline std::vector<TriangleRef> brute_force_trichromatic(const ColouredGrid& grid, unsigned threads = 1) {
  const std::vector<Colour> table = grid.colour_table(threads);
  const std::uint32_t s = grid.side();
  std::vector<TriangleRef> out;
  for (std::uint32_t y = 0; y + 1 < s; ++y) {
    for (std::uint32_t x = 0; x + 1 < s; ++x) {
      for (Half h : {Half::Lower, Half::Upper}) {
        const TriangleRef t{x, y, h};
        const auto v = t.vertices();
        const Colour a = table[std::size_t{v[0].y} * s + v[0].x];
        const Colour b = table[std::size_t{v[1].y} * s + v[1].x];
        const Colour c = table[std::size_t{v[2].y} * s + v[2].x];
        if (a != b && b != c && a != c) out.push_back(t);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reduction to End-of-line

/// End-of-line instance whose vertices are triangles (vertex 0 stands for the
/// exterior entry edge) together with the map back to triangles.
class SpernerToEol {
 public:
  SpernerToEol(EndOfLineInstance eol, std::uint32_t cells) : eol_(std::move(eol)), cells_(cells) {}

  const EndOfLineInstance& instance() const noexcept { return eol_; }

  static std::uint64_t label(const TriangleRef& t, std::uint32_t cells) {
    return 1 + 2 * (std::uint64_t{t.y} * cells + t.x) + static_cast<std::uint64_t>(t.half);
  }

  std::uint64_t encode(const TriangleRef& t) const { return label(t, cells_); }

  TriangleRef decode(const BitString& x) const {
    const std::uint64_t id = x.to_uint();
    const std::uint64_t count = 2ull * cells_ * cells_;
    if (id == 0 || id > count) {
      throw DecodeError("vertex " + x.to_string() + " does not name a triangle");
    }
    const std::uint64_t cell = (id - 1) / 2;
    return TriangleRef{static_cast<std::uint32_t>(cell % cells_),
                       static_cast<std::uint32_t>(cell / cells_),
                       (id - 1) % 2 == 0 ? Half::Lower : Half::Upper};
  }

  TriangleRef decode(const EolSolution& s) const { return decode(s.x); }

 private:
  EndOfLineInstance eol_;
  std::uint32_t cells_;
};

/// Arcs cross red/yellow edges with red on the left; the exterior edge
/// (0,0)-(1,0) becomes the arc out of 0^n. m <= 9 so that triangle labels fit
/// the 20-bit truth-table cap.
inline SpernerToEol sperner_to_eol(const ColouredGrid& grid) {
  if (grid.m() > 9) {
    throw CapExceeded("sperner_to_eol: m=" + std::to_string(grid.m()) + " exceeds cap 9");
  }
  if (!validate_boundary(grid).ok()) throw ValidityError("sperner_to_eol: boundary rule violated");
  const std::vector<Colour> table = grid.colour_table();
  const std::uint32_t s = grid.side(), cells = s - 1;
  const std::uint64_t count = 2ull * cells * cells;
  std::size_t n = 1;
  while ((std::uint64_t{1} << n) < count + 1) ++n;

  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> succ(size), pred(size);
  for (std::uint64_t v = 0; v < size; ++v) succ[v] = pred[v] = v;
  auto label = [cells](const TriangleRef& t) { return SpernerToEol::label(t, cells); };
  const TriangleRef entry{0, 0, Half::Lower};
  succ[0] = label(entry);

  for (std::uint32_t y = 0; y < cells; ++y) {
    for (std::uint32_t x = 0; x < cells; ++x) {
      for (Half h : {Half::Lower, Half::Upper}) {
        const TriangleRef t{x, y, h};
        const auto v = t.vertices();
        const std::array<Colour, 3> c{table[std::size_t{v[0].y} * s + v[0].x],
                                      table[std::size_t{v[1].y} * s + v[1].x],
                                      table[std::size_t{v[2].y} * s + v[2].x]};
        const auto edges = detail::crossing_edges(c);
        const std::uint64_t id = label(t);
        if (edges.out >= 0) {
          if (auto next = detail::neighbour_across(t, edges.out, cells)) succ[id] = label(*next);
        }
        if (edges.in >= 0) {
          if (auto prev = detail::neighbour_across(t, edges.in, cells)) {
            pred[id] = label(*prev);
          } else if (t == entry && edges.in == 0) {
            pred[id] = 0;
          }
        }
      }
    }
  }
  return SpernerToEol(make_eol_instance(n, succ, pred), cells);
}

// ---------------------------------------------------------------------------
// Files and rendering

inline std::string serialize_sperner(const ColouredGrid& grid) {
  return "SPERNER m=" + std::to_string(grid.m()) + "\n" + serialize_circuit(grid.circuit());
}

inline ColouredGrid read_grid_body(LineReader& reader, std::uint64_t m) {
  if (m == 0 || m > 30) reader.fail("m must be in 1..30");
  BooleanCircuit circuit = read_circuit(reader);
  if (circuit.input_width() != 2 * m || circuit.output_width() != 2) {
    reader.fail("colour circuit must map 2m=" + std::to_string(2 * m) + " bits to 2 bits");
  }
  return ColouredGrid(m, std::move(circuit));
}

inline ColouredGrid parse_sperner(std::istream& in) {
  LineReader reader(in);
  auto header = reader.next();
  if (!header) reader.fail("empty input; expected 'SPERNER m=<m>'");
  const auto tokens = split_ws(*header);
  std::optional<std::uint64_t> m;
  if (tokens.size() != 2 || tokens[0] != "SPERNER" || !(m = parse_keyed_uint(tokens[1], "m"))) {
    reader.fail("expected header 'SPERNER m=<m>'");
  }
  ColouredGrid grid = read_grid_body(reader, *m);
  if (reader.next()) reader.fail("unexpected content after the colour netlist");
  return grid;
}

inline ColouredGrid parse_sperner(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sperner(in);
}

/// Binary PPM (P6), one pixel per vertex, y increasing upwards. N <= 1025.
inline void write_ppm(const ColouredGrid& grid, std::ostream& out) {
  if (grid.m() > ColouredGrid::kMaxTabulatedM) throw CapExceeded("render: grid larger than 1025x1025");
  const std::vector<Colour> table = grid.colour_table();
  const std::uint32_t s = grid.side();
  out << "P6\n" << s << ' ' << s << "\n255\n";
  for (std::uint32_t row = 0; row < s; ++row) {
    const std::uint32_t y = s - 1 - row;
    for (std::uint32_t x = 0; x < s; ++x) {
      static constexpr unsigned char kRgb[3][3] = {{255, 0, 0}, {255, 255, 0}, {0, 0, 0}};
      const auto& rgb = kRgb[static_cast<int>(table[std::size_t{y} * s + x])];
      out.write(reinterpret_cast<const char*>(rgb), 3);
    }
  }
}

}  // namespace ppad
