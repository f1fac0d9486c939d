#pragma once

// Two-dimensional discrete Brouwer functions built from End-of-line graphs.
//
// The construction draws the graph as red/yellow strips on a black
// background. Geometry lives on a lattice of macro cells, each kCell x kCell
// grid vertices; fine vertex (x, y) belongs to macro cell
// ((x + kShift) / kCell, (y + kShift) / kCell). A strip crosses a macro cell
// through its central band (offsets 2..5): two vertices of red on the left of
// the direction of travel and two of yellow on the right. Black gaps between
// strips in different cells are at least four vertices wide, so no 3x3 window
// away from a strip end sees all three colours.
//
// Layout (macro coordinates):
//   * every active vertex v gets a slot s (in increasing label order); its
//     segment runs east along macro row 0 from column L(s) = 6s+1 to
//     R(s) = 6s+4. The origin's segment instead starts at column 0, so its
//     red band merges with the red x = 0 boundary column and its yellow band
//     with the yellow y = 0 boundary row.
//   * an arc (v_i, v_j) is a bridge: north from R(slot i), across at row
//     3 + 3k where k is the rank of the arc's key i + 2^n * j, then south into
//     L(slot j).
//   * where a bridge's horizontal section crosses another bridge's vertical
//     section, the 3x3 block around the crossing is rewired: the incoming
//     horizontal strip turns onto the outgoing vertical one and the incoming
//     vertical strip turns onto the outgoing horizontal one. The two turns sit
//     in opposite corners of the block, so the strips never touch.
//
// Strip ends (segment caps) are the only places where red, yellow and black
// meet, and each cap belongs to exactly one End-of-line solution.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ppad/circuit.hpp"
#include "ppad/error.hpp"
#include "ppad/sperner.hpp"
#include "ppad/text_io.hpp"
#include "ppad/total_search.hpp"

namespace ppad {

namespace dbf_geometry {

inline constexpr std::int64_t kCell = 8;
inline constexpr std::int64_t kShift = 2;
inline constexpr std::int64_t kBandLo = 2;
inline constexpr std::int64_t kBandHi = 5;
inline constexpr std::uint32_t kSlotPitch = 6;
inline constexpr std::uint32_t kRowPitch = 3;

inline std::uint32_t left_column(std::size_t slot) { return kSlotPitch * static_cast<std::uint32_t>(slot) + 1; }
inline std::uint32_t right_column(std::size_t slot) { return kSlotPitch * static_cast<std::uint32_t>(slot) + 4; }
inline std::uint32_t bridge_row(std::size_t rank) { return kRowPitch * static_cast<std::uint32_t>(rank) + 3; }

enum class Side : std::uint8_t { North, East, South, West };

struct Heading {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Heading&, const Heading&) = default;
};

inline Heading toward(Side s) {
  switch (s) {
    case Side::North:
      return {0, 1};
    case Side::East:
      return {1, 0};
    case Side::South:
      return {0, -1};
    default:
      return {-1, 0};
  }
}

inline Side side_toward(int dx, int dy) {
  if (dx > 0) return Side::East;
  if (dx < 0) return Side::West;
  return dy > 0 ? Side::North : Side::South;
}

/// How a strip passes through one macro cell: the side it enters from and the
/// side it leaves by. A missing side is a strip end.
struct CellPath {
  std::optional<Side> in;
  std::optional<Side> out;

  bool straight_horizontal() const {
    return in && out && toward(*in).dy == 0 && toward(*out).dy == 0 && toward(*in) != toward(*out);
  }
  bool straight_vertical() const {
    return in && out && toward(*in).dx == 0 && toward(*out).dx == 0 && toward(*in) != toward(*out);
  }
};

inline bool on_left(Heading h, std::int64_t a, std::int64_t b) {
  if (h.dx > 0) return b >= 4;
  if (h.dx < 0) return b <= 3;
  if (h.dy > 0) return a <= 3;
  return a >= 4;
}

inline bool in_arm(Side s, std::int64_t a, std::int64_t b) {
  auto band = [](std::int64_t v) { return v >= kBandLo && v <= kBandHi; };
  switch (s) {
    case Side::East:
      return a > kBandHi && band(b);
    case Side::West:
      return a < kBandLo && band(b);
    case Side::North:
      return b > kBandHi && band(a);
    default:
      return b < kBandLo && band(a);
  }
}

/// Colour of offset (a, b) inside a macro cell carrying `path`.
inline Colour cell_colour(const CellPath& path, std::int64_t a, std::int64_t b) {
  auto by_side = [&](Heading h) { return on_left(h, a, b) ? Colour::Red : Colour::Yellow; };
  std::optional<Heading> h_in, h_out;
  if (path.in) h_in = Heading{-toward(*path.in).dx, -toward(*path.in).dy};
  if (path.out) h_out = toward(*path.out);
  if (path.in && in_arm(*path.in, a, b)) return by_side(*h_in);
  if (path.out && in_arm(*path.out, a, b)) return by_side(*h_out);
  const bool centre = a >= kBandLo && a <= kBandHi && b >= kBandLo && b <= kBandHi;
  if (!centre || (!h_in && !h_out)) return Colour::Black;
  if (!h_in || !h_out || *h_in == *h_out) return by_side(h_in ? *h_in : *h_out);
  const int turn = h_in->dx * h_out->dy - h_in->dy * h_out->dx;
  const bool left1 = on_left(*h_in, a, b), left2 = on_left(*h_out, a, b);
  if (turn > 0) return left1 && left2 ? Colour::Red : Colour::Yellow;
  return !left1 && !left2 ? Colour::Yellow : Colour::Red;
}

}  // namespace dbf_geometry

struct DbfSlot {
  std::uint64_t vertex = 0;
  std::uint32_t left_column = 0;
  std::uint32_t right_column = 0;
  bool start_cap = false;  // strip begins at the left end (a source)
  bool end_cap = false;    // strip ends at the right end (a sink)
};

struct DbfBridge {
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  std::uint32_t row = 0;
};

struct DbfGadget {
  std::uint32_t column = 0;
  std::uint32_t row = 0;
};

/// Geometry tables recording how a DBF was produced from an End-of-line graph.
struct DbfProvenance {
  std::size_t n = 0;
  std::string source;
  std::uint32_t macro_columns = 0;
  std::uint32_t macro_rows = 0;
  std::vector<DbfSlot> slots;
  std::vector<DbfBridge> bridges;
  std::vector<DbfGadget> gadgets;

  /// Fine-grid bounding box [x0, x1] x [y0, y1] of a gadget's 3x3 block.
  std::array<std::int64_t, 4> gadget_box(const DbfGadget& g) const {
    using namespace dbf_geometry;
    const std::int64_t x0 = (std::int64_t{g.column} - 1) * kCell - kShift;
    const std::int64_t y0 = (std::int64_t{g.row} - 1) * kCell - kShift;
    return {x0, x0 + 3 * kCell - 1, y0, y0 + 3 * kCell - 1};
  }
};

class DbfInstance {
 public:
  explicit DbfInstance(ColouredGrid grid, std::optional<DbfProvenance> provenance = std::nullopt)
      : grid_(std::move(grid)), provenance_(std::move(provenance)) {}

  std::size_t m() const noexcept { return grid_.m(); }
  const ColouredGrid& grid() const noexcept { return grid_; }
  const std::optional<DbfProvenance>& provenance() const noexcept { return provenance_; }
  Colour colour_of(std::uint32_t x, std::uint32_t y) const { return grid_.colour_of(x, y); }

 private:
  ColouredGrid grid_;
  std::optional<DbfProvenance> provenance_;
};

namespace detail {

struct CellMap {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<dbf_geometry::CellPath>> cells;

  void put(std::uint32_t col, std::uint32_t row, dbf_geometry::CellPath path) {
    cells[{col, row}].push_back(path);
  }

  dbf_geometry::CellPath take_single(std::uint32_t col, std::uint32_t row) {
    auto it = cells.find({col, row});
    if (it == cells.end() || it->second.size() != 1) {
      throw Error("eol_to_dbf: crossover block at (" + std::to_string(col) + "," + std::to_string(row) +
                  ") overlaps other geometry");
    }
    auto path = it->second.front();
    cells.erase(it);
    return path;
  }

  void require_empty(std::int64_t col, std::int64_t row) const {
    if (col < 0 || row < 0) return;
    if (cells.count({static_cast<std::uint32_t>(col), static_cast<std::uint32_t>(row)})) {
      throw Error("eol_to_dbf: crossover block corner (" + std::to_string(col) + "," +
                  std::to_string(row) + ") is occupied");
    }
  }
};

}  // namespace detail

/// Encodes an End-of-line instance (n <= 10) as a discrete Brouwer function.
/// The grid exponent m is the smallest value that fits the geometry plus a
/// one-cell margin; instances needing m > 10 are rejected.
inline DbfInstance eol_to_dbf(const EndOfLineInstance& inst, std::string source = {}) {
  using namespace dbf_geometry;
  using dbf_geometry::Side;
  if (inst.n() > 10) throw CapExceeded("eol_to_dbf: n=" + std::to_string(inst.n()) + " exceeds cap 10");
  const EolTables t = tabulate_eol(inst);
  const std::uint64_t size = t.successor.size();

  auto out_arc = [&](std::uint64_t v) { return t.successor[v] != v && t.has_out_arc(v); };
  auto in_arc = [&](std::uint64_t v) { return t.predecessor[v] != v && t.has_in_arc(v); };
  auto is_solution = [&](std::uint64_t v) { return !t.has_out_arc(v) || (v != 0 && !t.has_in_arc(v)); };

  DbfProvenance prov;
  prov.n = inst.n();
  prov.source = std::move(source);
  std::map<std::uint64_t, std::size_t> slot_of;
  for (std::uint64_t v = 0; v < size; ++v) {
    if (v != 0 && !is_solution(v) && !out_arc(v) && !in_arc(v)) continue;
    const std::size_t s = prov.slots.size();
    slot_of[v] = s;
    prov.slots.push_back({v, s == 0 ? 0 : left_column(s), right_column(s), v != 0 && !in_arc(v), !out_arc(v)});
  }

  std::vector<std::pair<std::uint64_t, DbfBridge>> keyed;
  for (std::uint64_t v = 0; v < size; ++v) {
    if (out_arc(v)) keyed.push_back({v + size * t.successor[v], DbfBridge{v, t.successor[v], 0}});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    keyed[k].second.row = bridge_row(k);
    prov.bridges.push_back(keyed[k].second);
  }

  detail::CellMap map;
  for (const DbfSlot& slot : prov.slots) {
    const std::uint32_t first = slot.left_column;
    for (std::uint32_t c = first; c <= slot.right_column; ++c) {
      const bool opens = c == first && slot.vertex != 0;
      const bool closes = c == slot.right_column;
      CellPath p{Side::West, Side::East};
      if (opens && slot.start_cap) p.in.reset();
      else if (opens) p.in.emplace(Side::North);
      if (closes && slot.end_cap) p.out.reset();
      else if (closes) p.out.emplace(Side::North);
      map.put(c, 0, p);
    }
  }
  for (const DbfBridge& b : prov.bridges) {
    const std::uint32_t up = prov.slots[slot_of[b.from]].right_column;
    const std::uint32_t down = prov.slots[slot_of[b.to]].left_column;
    const bool east = down > up;
    const Side across_in = east ? Side::West : Side::East;
    const Side across_out = east ? Side::East : Side::West;
    for (std::uint32_t r = 1; r < b.row; ++r) map.put(up, r, {Side::South, Side::North});
    map.put(up, b.row, {Side::South, across_out});
    for (std::uint32_t c = east ? up + 1 : down + 1; c < (east ? down : up); ++c) {
      map.put(c, b.row, {across_in, across_out});
    }
    map.put(down, b.row, {across_in, Side::South});
    for (std::uint32_t r = 1; r < b.row; ++r) map.put(down, r, {Side::North, Side::South});
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> crossings;
  for (const auto& [cell, paths] : map.cells) {
    if (paths.size() == 1) continue;
    const bool ok = paths.size() == 2 && ((paths[0].straight_horizontal() && paths[1].straight_vertical()) ||
                                          (paths[0].straight_vertical() && paths[1].straight_horizontal()));
    if (!ok) {
      throw Error("eol_to_dbf: geometry conflict at macro cell (" + std::to_string(cell.first) + "," +
                  std::to_string(cell.second) + ")");
    }
    crossings.push_back(cell);
  }
  for (const auto& [c, h] : crossings) {
    auto both = map.cells.at({c, h});
    map.cells.erase({c, h});
    const CellPath& hp = both[0].straight_horizontal() ? both[0] : both[1];
    const CellPath& vp = both[0].straight_horizontal() ? both[1] : both[0];
    const int dh = toward(*hp.out).dx, dv = toward(*vp.out).dy;
    const std::uint32_t cm = c - dh, cp = c + dh, hm = h - dv, hp_row = h + dv;
    map.take_single(cm, h);
    map.take_single(cp, h);
    map.take_single(c, hm);
    map.take_single(c, hp_row);
    map.require_empty(cm, hm);
    map.require_empty(cp, hp_row);
    map.require_empty(cm, hp_row);
    map.require_empty(cp, hm);
    // Incoming horizontal strip turns onto the outgoing vertical one.
    map.put(cm, h, {side_toward(-dh, 0), side_toward(0, dv)});
    map.put(cm, hp_row, {side_toward(0, -dv), side_toward(dh, 0)});
    map.put(c, hp_row, {side_toward(-dh, 0), side_toward(0, dv)});
    // Incoming vertical strip turns onto the outgoing horizontal one.
    map.put(c, hm, {side_toward(0, -dv), side_toward(dh, 0)});
    map.put(cp, hm, {side_toward(-dh, 0), side_toward(0, dv)});
    map.put(cp, h, {side_toward(0, -dv), side_toward(dh, 0)});
    prov.gadgets.push_back({c, h});
  }

  std::uint32_t max_col = 0, max_row = 0;
  for (const auto& [cell, paths] : map.cells) {
    max_col = std::max(max_col, cell.first);
    max_row = std::max(max_row, cell.second);
  }
  prov.macro_columns = max_col + 2;
  prov.macro_rows = max_row + 2;
  const std::uint64_t needed = std::uint64_t{std::max(prov.macro_columns, prov.macro_rows)} * kCell;
  std::size_t m = 1;
  while ((std::uint64_t{1} << m) < needed) ++m;
  if (m > ColouredGrid::kMaxTabulatedM) {
    throw CapExceeded("eol_to_dbf: geometry needs a 2^" + std::to_string(m) +
                      " grid, above the cap 2^10 (too many active vertices or arcs)");
  }

  std::vector<CellPath> dense(std::size_t{prov.macro_columns} * prov.macro_rows);
  std::vector<bool> occupied(dense.size(), false);
  for (const auto& [cell, paths] : map.cells) {
    const std::size_t idx = std::size_t{cell.second} * prov.macro_columns + cell.first;
    dense[idx] = paths.front();
    occupied[idx] = true;
  }
  const std::uint32_t span = std::uint32_t{1} << m;
  std::vector<std::uint64_t> codes(std::size_t{span} * span);
  for (std::uint32_t x = 0; x < span; ++x) {
    for (std::uint32_t y = 0; y < span; ++y) {
      Colour colour = Colour::Black;
      if (auto forced = ColouredGrid::forced_colour(x, y, span + 1)) {
        colour = *forced;
      } else {
        const std::int64_t col = (x + kShift) / kCell, row = (y + kShift) / kCell;
        if (col < prov.macro_columns && row < prov.macro_rows) {
          const std::size_t idx = static_cast<std::size_t>(row) * prov.macro_columns + col;
          if (occupied[idx]) colour = cell_colour(dense[idx], (x + kShift) % kCell, (y + kShift) % kCell);
        }
      }
      codes[(std::size_t{x} << m) | y] = static_cast<std::uint64_t>(colour);
    }
  }
  return DbfInstance(ColouredGrid(m, compile_truth_table(2 * m, 2, codes)), std::move(prov));
}

/// Interior vertices whose four incident cells carry all three colours
/// (equivalently, whose 3x3 neighbourhood does). Row-major order; m <= 10.
inline std::vector<GridPoint> find_panchromatic(const ColouredGrid& grid, unsigned threads = 1) {
  const std::vector<Colour> table = grid.colour_table(threads);
  const std::uint32_t s = grid.side();
  std::vector<GridPoint> out;
  for (std::uint32_t y = 1; y + 1 < s; ++y) {
    for (std::uint32_t x = 1; x + 1 < s; ++x) {
      unsigned seen = 0;
      for (std::uint32_t yy = y - 1; yy <= y + 1; ++yy) {
        for (std::uint32_t xx = x - 1; xx <= x + 1; ++xx) {
          seen |= 1U << static_cast<unsigned>(table[std::size_t{yy} * s + xx]);
        }
      }
      if (seen == 7U) out.push_back({x, y});
    }
  }
  return out;
}

inline std::vector<GridPoint> find_panchromatic(const DbfInstance& dbf, unsigned threads = 1) {
  return find_panchromatic(dbf.grid(), threads);
}

/// Maps a panchromatic point back to the source vertex whose strip end
/// contains it. Requires provenance.
inline BitString decode_solution(const DbfInstance& dbf, const GridPoint& p) {
  using namespace dbf_geometry;
  if (!dbf.provenance()) throw DecodeError("decode_solution: instance carries no provenance");
  const DbfProvenance& prov = *dbf.provenance();
  const std::int64_t col = (std::int64_t{p.x} + kShift) / kCell;
  const std::int64_t row = (std::int64_t{p.y} + kShift) / kCell;
  if (row == 0) {
    for (const DbfSlot& slot : prov.slots) {
      if ((slot.start_cap && col == slot.left_column) || (slot.end_cap && col == slot.right_column)) {
        return BitString::from_uint(slot.vertex, prov.n);
      }
    }
  }
  throw DecodeError("point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                    ") is not at any strip end of the provenance geometry");
}

// ---------------------------------------------------------------------------
// DBF file: `DBF m=<m>`, the colour netlist, then optionally
//
//   PROVENANCE n=<n> columns=<c> rows=<r>
//   SOURCE <free text>
//   SLOT <vertex> <left> <right> <start_cap> <end_cap>
//   BRIDGE <from> <to> <row>
//   GADGET <column> <row>
//   END

inline std::string serialize_dbf(const DbfInstance& dbf) {
  std::ostringstream out;
  out << "DBF m=" << dbf.m() << '\n' << serialize_circuit(dbf.grid().circuit());
  if (const auto& prov = dbf.provenance()) {
    out << "PROVENANCE n=" << prov->n << " columns=" << prov->macro_columns << " rows=" << prov->macro_rows
        << '\n';
    if (!prov->source.empty()) out << "SOURCE " << prov->source << '\n';
    for (const auto& s : prov->slots) {
      out << "SLOT " << s.vertex << ' ' << s.left_column << ' ' << s.right_column << ' '
          << (s.start_cap ? 1 : 0) << ' ' << (s.end_cap ? 1 : 0) << '\n';
    }
    for (const auto& b : prov->bridges) out << "BRIDGE " << b.from << ' ' << b.to << ' ' << b.row << '\n';
    for (const auto& g : prov->gadgets) out << "GADGET " << g.column << ' ' << g.row << '\n';
    out << "END\n";
  }
  return out.str();
}

inline DbfInstance parse_dbf(std::istream& in) {
  LineReader reader(in);
  auto header = reader.next();
  if (!header) reader.fail("empty input; expected 'DBF m=<m>'");
  auto tokens = split_ws(*header);
  std::optional<std::uint64_t> m;
  if (tokens.size() != 2 || tokens[0] != "DBF" || !(m = parse_keyed_uint(tokens[1], "m"))) {
    reader.fail("expected header 'DBF m=<m>'");
  }
  ColouredGrid grid = read_grid_body(reader, *m);
  auto line = reader.next();
  if (!line) return DbfInstance(std::move(grid));

  tokens = split_ws(*line);
  DbfProvenance prov;
  std::optional<std::uint64_t> n, cols, rows;
  if (tokens.size() != 4 || tokens[0] != "PROVENANCE" || !(n = parse_keyed_uint(tokens[1], "n")) ||
      !(cols = parse_keyed_uint(tokens[2], "columns")) || !(rows = parse_keyed_uint(tokens[3], "rows"))) {
    reader.fail("expected 'PROVENANCE n=<n> columns=<c> rows=<r>'");
  }
  if (*n == 0 || *n > 64) reader.fail("provenance n must be in 1..64");
  prov.n = *n;
  prov.macro_columns = static_cast<std::uint32_t>(*cols);
  prov.macro_rows = static_cast<std::uint32_t>(*rows);
  auto numbers = [&](const std::vector<std::string_view>& tk, std::size_t count) {
    if (tk.size() != count + 1) reader.fail(std::string(tk[0]) + " takes " + std::to_string(count) + " fields");
    std::vector<std::uint64_t> v;
    for (std::size_t i = 1; i < tk.size(); ++i) {
      auto x = parse_uint(tk[i]);
      if (!x) reader.fail("bad number '" + std::string(tk[i]) + "'");
      v.push_back(*x);
    }
    return v;
  };
  bool ended = false;
  while ((line = reader.next())) {
    tokens = split_ws(*line);
    if (tokens[0] == "END") {
      ended = true;
      break;
    }
    if (tokens[0] == "SOURCE") {
      prov.source = std::string(LineReader::trim(std::string_view(*line).substr(6)));
    } else if (tokens[0] == "SLOT") {
      auto v = numbers(tokens, 5);
      prov.slots.push_back({v[0], static_cast<std::uint32_t>(v[1]), static_cast<std::uint32_t>(v[2]), v[3] != 0,
                            v[4] != 0});
    } else if (tokens[0] == "BRIDGE") {
      auto v = numbers(tokens, 3);
      prov.bridges.push_back({v[0], v[1], static_cast<std::uint32_t>(v[2])});
    } else if (tokens[0] == "GADGET") {
      auto v = numbers(tokens, 2);
      prov.gadgets.push_back({static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[1])});
    } else {
      reader.fail("unknown provenance record '" + std::string(tokens[0]) + "'");
    }
  }
  if (!ended) reader.fail("provenance block is missing END");
  if (reader.next()) reader.fail("unexpected content after END");
  return DbfInstance(std::move(grid), std::move(prov));
}

inline DbfInstance parse_dbf(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dbf(in);
}

}  // namespace ppad
