#pragma once

// Boolean circuits over the gate basis {INPUT, CONST, NOT, AND, OR, XOR}.
//
// Every exponential-size object in the library (End-of-line graphs, Sperner
// colourings, discrete Brouwer functions) is described by one of these
// circuits. Nodes are stored in topological order: a gate may only refer to
// nodes with a smaller index, so evaluation is a single forward sweep.
//
// Bit strings are written most-significant bit first: the string "10"
// denotes the integer 2, and INPUT node k receives character k.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ppad/error.hpp"
#include "ppad/text_io.hpp"

namespace ppad {

class BitString {
 public:
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw ShapeError("bit string must have width >= 1");
    for (auto b : bits_) {
      if (b > 1) throw ShapeError("bit string elements must be 0 or 1");
    }
  }

  static BitString zeros(std::size_t width) {
    return BitString(std::vector<std::uint8_t>(width, 0));
  }

  static BitString from_uint(std::uint64_t value, std::size_t width) {
    if (width == 0 || width > 64) throw ShapeError("bit string width must be in 1..64");
    if (width < 64 && (value >> width) != 0) {
      throw ShapeError("value " + std::to_string(value) + " does not fit in " +
                       std::to_string(width) + " bits");
    }
    std::vector<std::uint8_t> bits(width);
    for (std::size_t i = 0; i < width; ++i) bits[i] = (value >> (width - 1 - i)) & 1U;
    return BitString(std::move(bits));
  }

  static BitString parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw FormatError("bit string may only contain '0' and '1': '" + std::string(text) + "'");
      }
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (bits.empty()) throw FormatError("empty bit string");
    return BitString(std::move(bits));
  }

  std::size_t width() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_.at(i) != 0; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  bool is_zero() const noexcept {
    return std::all_of(bits_.begin(), bits_.end(), [](auto b) { return b == 0; });
  }

  std::uint64_t to_uint() const {
    if (width() > 64) throw ShapeError("bit string wider than 64 bits");
    std::uint64_t value = 0;
    for (auto b : bits_) value = (value << 1) | b;
    return value;
  }

  std::string to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
    return out;
  }

  friend auto operator<=>(const BitString&, const BitString&) = default;
  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class GateKind : std::uint8_t { Input, Const, Not, And, Or, Xor };

/// One circuit node. `a`/`b` are operand node indices; for Const, `a` holds the value.
struct Gate {
  GateKind kind = GateKind::Input;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  static Gate input() { return {GateKind::Input, 0, 0}; }
  static Gate constant(bool value) { return {GateKind::Const, value ? 1U : 0U, 0}; }
  static Gate logical_not(std::uint32_t x) { return {GateKind::Not, x, 0}; }
  static Gate logical_and(std::uint32_t x, std::uint32_t y) { return {GateKind::And, x, y}; }
  static Gate logical_or(std::uint32_t x, std::uint32_t y) { return {GateKind::Or, x, y}; }
  static Gate logical_xor(std::uint32_t x, std::uint32_t y) { return {GateKind::Xor, x, y}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

inline int operand_count(GateKind kind) {
  switch (kind) {
    case GateKind::Input:
    case GateKind::Const:
      return 0;
    case GateKind::Not:
      return 1;
    default:
      return 2;
  }
}

/// Immutable acyclic circuit. Safe to evaluate concurrently.
class BooleanCircuit {
 public:
  /// Maximum input width accepted by tabulate() and from_truth_table().
  static constexpr std::size_t kMaxTableWidth = 20;

  BooleanCircuit(std::vector<Gate> gates, std::vector<std::uint32_t> outputs)
      : gates_(std::move(gates)), outputs_(std::move(outputs)) {
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      const Gate& g = gates_[i];
      const int arity = operand_count(g.kind);
      if (g.kind == GateKind::Input) {
        input_nodes_.push_back(static_cast<std::uint32_t>(i));
      } else if (g.kind == GateKind::Const && g.a > 1) {
        throw ValidityError("node " + std::to_string(i) + ": constant must be 0 or 1");
      }
      if ((arity >= 1 && g.a >= i) || (arity == 2 && g.b >= i)) {
        throw ValidityError("node " + std::to_string(i) +
                            " refers to a node that is not strictly earlier");
      }
    }
    if (input_nodes_.empty()) throw ValidityError("circuit has no INPUT nodes");
    if (outputs_.empty()) throw ValidityError("circuit has no outputs");
    for (auto o : outputs_) {
      if (o >= gates_.size()) {
        throw ValidityError("output refers to node " + std::to_string(o) + " but the circuit has " +
                            std::to_string(gates_.size()) + " nodes");
      }
    }
  }

  std::size_t input_width() const noexcept { return input_nodes_.size(); }
  std::size_t output_width() const noexcept { return outputs_.size(); }
  std::size_t size() const noexcept { return gates_.size(); }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<std::uint32_t>& outputs() const noexcept { return outputs_; }

  /// Bit-parallel evaluation: word k of `inputs` carries 64 independent values
  /// of input k, one per lane. `scratch` is resized as needed.
  void evaluate_lanes(std::span<const std::uint64_t> inputs, std::span<std::uint64_t> outputs,
                      std::vector<std::uint64_t>& scratch) const {
    if (inputs.size() != input_width() || outputs.size() != output_width()) {
      throw ShapeError("lane evaluation: word counts do not match the circuit");
    }
    scratch.resize(gates_.size());
    std::size_t next_input = 0;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      const Gate& g = gates_[i];
      std::uint64_t v = 0;
      switch (g.kind) {
        case GateKind::Input:
          v = inputs[next_input++];
          break;
        case GateKind::Const:
          v = g.a != 0 ? ~std::uint64_t{0} : 0;
          break;
        case GateKind::Not:
          v = ~scratch[g.a];
          break;
        case GateKind::And:
          v = scratch[g.a] & scratch[g.b];
          break;
        case GateKind::Or:
          v = scratch[g.a] | scratch[g.b];
          break;
        case GateKind::Xor:
          v = scratch[g.a] ^ scratch[g.b];
          break;
      }
      scratch[i] = v;
    }
    for (std::size_t o = 0; o < outputs_.size(); ++o) outputs[o] = scratch[outputs_[o]];
  }

  BitString evaluate(const BitString& input) const {
    if (input.width() != input_width()) {
      throw ShapeError("circuit expects " + std::to_string(input_width()) +
                       " input bits, got " + std::to_string(input.width()));
    }
    std::vector<std::uint64_t> in(input_width()), out(output_width()), scratch;
    for (std::size_t k = 0; k < in.size(); ++k) in[k] = input[k] ? 1 : 0;
    evaluate_lanes(in, out, scratch);
    std::vector<std::uint8_t> bits(out.size());
    for (std::size_t o = 0; o < out.size(); ++o) bits[o] = static_cast<std::uint8_t>(out[o] & 1U);
    return BitString(std::move(bits));
  }

  /// Integer form of evaluate(): both sides use the MSB-first convention.
  std::uint64_t evaluate_uint(std::uint64_t input) const {
    return evaluate(BitString::from_uint(input, input_width())).to_uint();
  }

  /// Full truth table: entry x is the output for input x. Input width must be
  /// at most kMaxTableWidth and output width at most 64. The input space is
  /// split across `threads` workers; the result does not depend on the count.
  std::vector<std::uint64_t> tabulate(unsigned threads = 1) const {
    const std::size_t n = input_width();
    if (n > kMaxTableWidth) {
      throw CapExceeded("tabulate: input width " + std::to_string(n) + " exceeds cap " +
                        std::to_string(kMaxTableWidth));
    }
    if (output_width() > 64) throw CapExceeded("tabulate: output width exceeds 64");
    const std::uint64_t total = std::uint64_t{1} << n;
    std::vector<std::uint64_t> table(total);
    const std::uint64_t batches = (total + 63) / 64;

    auto work = [&](std::uint64_t first_batch, std::uint64_t last_batch) {
      std::vector<std::uint64_t> in(n), out(output_width()), scratch;
      for (std::uint64_t batch = first_batch; batch < last_batch; ++batch) {
        const std::uint64_t base = batch * 64;
        const std::uint64_t lanes = std::min<std::uint64_t>(64, total - base);
        std::fill(in.begin(), in.end(), 0);
        for (std::uint64_t lane = 0; lane < lanes; ++lane) {
          const std::uint64_t x = base + lane;
          for (std::size_t k = 0; k < n; ++k) in[k] |= ((x >> (n - 1 - k)) & 1U) << lane;
        }
        evaluate_lanes(in, out, scratch);
        const std::size_t w = out.size();
        for (std::uint64_t lane = 0; lane < lanes; ++lane) {
          std::uint64_t value = 0;
          for (std::size_t o = 0; o < w; ++o) value = (value << 1) | ((out[o] >> lane) & 1U);
          table[base + lane] = value;
        }
      }
    };

    const std::uint64_t workers = std::clamp<std::uint64_t>(threads, 1, batches);
    if (workers == 1) {
      work(0, batches);
    } else {
      std::vector<std::thread> pool;
      const std::uint64_t per = (batches + workers - 1) / workers;
      for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t lo = w * per, hi = std::min(batches, lo + per);
        if (lo < hi) pool.emplace_back(work, lo, hi);
      }
      for (auto& t : pool) t.join();
    }
    return table;
  }

 private:
  std::vector<Gate> gates_;
  std::vector<std::uint32_t> outputs_;
  std::vector<std::uint32_t> input_nodes_;
};

/// Incremental circuit construction with constant folding and structural
/// hashing, so identical subcircuits are emitted once.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::size_t input_width) {
    if (input_width == 0) throw ShapeError("circuit needs at least one input");
    for (std::size_t k = 0; k < input_width; ++k) gates_.push_back(Gate::input());
    inputs_ = input_width;
  }

  std::uint32_t input(std::size_t k) const {
    if (k >= inputs_) throw ShapeError("input index out of range");
    return static_cast<std::uint32_t>(k);
  }

  std::uint32_t constant(bool value) {
    auto& slot = value ? one_ : zero_;
    if (slot < 0) slot = static_cast<std::int64_t>(emit(Gate::constant(value)));
    return static_cast<std::uint32_t>(slot);
  }

  std::uint32_t logical_not(std::uint32_t x) {
    if (auto c = const_value(x)) return constant(!*c);
    if (gates_[x].kind == GateKind::Not) return gates_[x].a;
    return intern(Gate::logical_not(x));
  }

  std::uint32_t logical_and(std::uint32_t x, std::uint32_t y) {
    if (x > y) std::swap(x, y);
    auto cx = const_value(x), cy = const_value(y);
    if ((cx && !*cx) || (cy && !*cy)) return constant(false);
    if (cx) return y;
    if (cy) return x;
    if (x == y) return x;
    return intern(Gate::logical_and(x, y));
  }

  std::uint32_t logical_or(std::uint32_t x, std::uint32_t y) {
    if (x > y) std::swap(x, y);
    auto cx = const_value(x), cy = const_value(y);
    if ((cx && *cx) || (cy && *cy)) return constant(true);
    if (cx) return y;
    if (cy) return x;
    if (x == y) return x;
    return intern(Gate::logical_or(x, y));
  }

  std::uint32_t logical_xor(std::uint32_t x, std::uint32_t y) {
    if (x > y) std::swap(x, y);
    auto cx = const_value(x), cy = const_value(y);
    if (cx && cy) return constant(*cx != *cy);
    if (cx) return *cx ? logical_not(y) : y;
    if (cy) return *cy ? logical_not(x) : x;
    if (x == y) return constant(false);
    return intern(Gate::logical_xor(x, y));
  }

  /// `select ? when_one : when_zero`.
  std::uint32_t mux(std::uint32_t select, std::uint32_t when_zero, std::uint32_t when_one) {
    if (when_zero == when_one) return when_zero;
    auto c0 = const_value(when_zero), c1 = const_value(when_one);
    if (c0 && c1) return *c1 ? select : logical_not(select);
    if (c0) {
      return *c0 ? logical_or(logical_not(select), when_one) : logical_and(select, when_one);
    }
    if (c1) {
      return *c1 ? logical_or(select, when_zero) : logical_and(logical_not(select), when_zero);
    }
    return logical_xor(when_zero, logical_and(select, logical_xor(when_zero, when_one)));
  }

  std::size_t size() const noexcept { return gates_.size(); }

  BooleanCircuit build(std::vector<std::uint32_t> outputs) const {
    return BooleanCircuit(gates_, std::move(outputs));
  }

 private:
  std::optional<bool> const_value(std::uint32_t x) const {
    if (gates_[x].kind == GateKind::Const) return gates_[x].a != 0;
    return std::nullopt;
  }

  std::uint32_t emit(Gate g) {
    gates_.push_back(g);
    return static_cast<std::uint32_t>(gates_.size() - 1);
  }

  std::uint32_t intern(Gate g) {
    const std::uint64_t key = (std::uint64_t{static_cast<std::uint8_t>(g.kind)} << 60) |
                              (std::uint64_t{g.a} << 30) | g.b;
    auto [it, inserted] = interned_.try_emplace(key, 0);
    if (inserted) it->second = emit(g);
    return it->second;
  }

  std::vector<Gate> gates_;
  std::size_t inputs_ = 0;
  std::int64_t zero_ = -1;
  std::int64_t one_ = -1;
  std::unordered_map<std::uint64_t, std::uint32_t> interned_;
};

/// Compiles a dense truth table (entry x is the output for input x, output
/// bits MSB first) into a multiplexer tree selecting on input bits.
inline BooleanCircuit compile_truth_table(std::size_t input_width, std::size_t output_width,
                                          std::span<const std::uint64_t> values) {
  if (input_width == 0 || input_width > BooleanCircuit::kMaxTableWidth) {
    throw CapExceeded("truth table input width must be in 1.." +
                      std::to_string(BooleanCircuit::kMaxTableWidth));
  }
  if (output_width == 0 || output_width > 64) {
    throw ShapeError("truth table output width must be in 1..64");
  }
  const std::size_t rows = std::size_t{1} << input_width;
  if (values.size() != rows) throw ShapeError("dense truth table must have 2^n rows");

  CircuitBuilder builder(input_width);
  std::vector<std::uint32_t> outputs;
  std::vector<std::uint32_t> level(rows);
  for (std::size_t o = 0; o < output_width; ++o) {
    const unsigned shift = static_cast<unsigned>(output_width - 1 - o);
    level.resize(rows);
    for (std::size_t x = 0; x < rows; ++x) level[x] = builder.constant(((values[x] >> shift) & 1U) != 0);
    // Adjacent rows differ in the last input; fold one input per pass.
    for (std::size_t k = input_width; k-- > 0;) {
      const std::uint32_t select = builder.input(k);
      const std::size_t half = level.size() / 2;
      for (std::size_t p = 0; p < half; ++p) level[p] = builder.mux(select, level[2 * p], level[2 * p + 1]);
      level.resize(half);
    }
    outputs.push_back(level.front());
  }
  return builder.build(std::move(outputs));
}

/// Compiles an explicit mapping into a circuit. Inputs absent from the table
/// evaluate to the all-zero output.
inline BooleanCircuit from_truth_table(const std::map<BitString, BitString>& table) {
  if (table.empty()) throw FormatError("truth table is empty");
  const std::size_t n = table.begin()->first.width();
  const std::size_t w = table.begin()->second.width();
  if (n > BooleanCircuit::kMaxTableWidth) {
    throw CapExceeded("truth table input width " + std::to_string(n) + " exceeds cap " +
                      std::to_string(BooleanCircuit::kMaxTableWidth));
  }
  if (w > 64) throw FormatError("truth table outputs wider than 64 bits");
  std::vector<std::uint64_t> dense(std::size_t{1} << n, 0);
  for (const auto& [key, value] : table) {
    if (key.width() != n) throw FormatError("truth table keys have inconsistent widths");
    if (value.width() != w) throw FormatError("truth table values have inconsistent widths");
    dense[key.to_uint()] = value.to_uint();
  }
  return compile_truth_table(n, w, dense);
}

// ---------------------------------------------------------------------------
// Netlist text format
//
//   INPUT | CONST 0|1 | NOT i | AND i j | OR i j | XOR i j   (one node per line)
//   OUTPUTS i j ...                                          (final line)

inline std::string serialize_circuit(const BooleanCircuit& circuit) {
  std::ostringstream out;
  for (const Gate& g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::Input:
        out << "INPUT\n";
        break;
      case GateKind::Const:
        out << "CONST " << g.a << '\n';
        break;
      case GateKind::Not:
        out << "NOT " << g.a << '\n';
        break;
      case GateKind::And:
        out << "AND " << g.a << ' ' << g.b << '\n';
        break;
      case GateKind::Or:
        out << "OR " << g.a << ' ' << g.b << '\n';
        break;
      case GateKind::Xor:
        out << "XOR " << g.a << ' ' << g.b << '\n';
        break;
    }
  }
  out << "OUTPUTS";
  for (auto o : circuit.outputs()) out << ' ' << o;
  out << '\n';
  return out.str();
}

/// Reads one netlist from `reader`, stopping after its OUTPUTS line.
inline BooleanCircuit read_circuit(LineReader& reader) {
  std::vector<Gate> gates;
  while (auto line = reader.next()) {
    const auto tokens = split_ws(*line);
    const std::string_view op = tokens.front();
    auto operand = [&](std::size_t pos) -> std::uint32_t {
      auto v = parse_uint(tokens[pos]);
      if (!v || *v > UINT32_MAX) reader.fail("bad node index '" + std::string(tokens[pos]) + "'");
      if (*v >= gates.size()) {
        reader.fail("node " + std::to_string(gates.size()) + " refers to node " + std::to_string(*v) +
                    ", which is not strictly earlier");
      }
      return static_cast<std::uint32_t>(*v);
    };
    auto expect_arity = [&](std::size_t k) {
      if (tokens.size() != k + 1) {
        reader.fail(std::string(op) + " takes " + std::to_string(k) + " operand(s)");
      }
    };
    if (op == "OUTPUTS") {
      if (tokens.size() < 2) reader.fail("OUTPUTS needs at least one node index");
      std::vector<std::uint32_t> outputs;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto v = parse_uint(tokens[i]);
        if (!v || *v >= gates.size()) {
          reader.fail("output refers to node '" + std::string(tokens[i]) + "' but the circuit has " +
                      std::to_string(gates.size()) + " nodes");
        }
        outputs.push_back(static_cast<std::uint32_t>(*v));
      }
      try {
        return BooleanCircuit(std::move(gates), std::move(outputs));
      } catch (const ValidityError& e) {
        reader.fail(e.what());
      }
    }
    if (op == "INPUT") {
      expect_arity(0);
      gates.push_back(Gate::input());
    } else if (op == "CONST") {
      expect_arity(1);
      if (tokens[1] != "0" && tokens[1] != "1") reader.fail("CONST takes 0 or 1");
      gates.push_back(Gate::constant(tokens[1] == "1"));
    } else if (op == "NOT") {
      expect_arity(1);
      gates.push_back(Gate::logical_not(operand(1)));
    } else if (op == "AND" || op == "OR" || op == "XOR") {
      expect_arity(2);
      const auto a = operand(1), b = operand(2);
      gates.push_back(op == "AND"  ? Gate::logical_and(a, b)
                      : op == "OR" ? Gate::logical_or(a, b)
                                   : Gate::logical_xor(a, b));
    } else {
      reader.fail("unknown gate '" + std::string(op) + "'");
    }
  }
  reader.fail("netlist ended without an OUTPUTS line");
}

inline BooleanCircuit parse_circuit(std::istream& in) {
  LineReader reader(in);
  BooleanCircuit circuit = read_circuit(reader);
  if (reader.next()) reader.fail("unexpected content after OUTPUTS");
  return circuit;
}

inline BooleanCircuit parse_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_circuit(in);
}

}  // namespace ppad
