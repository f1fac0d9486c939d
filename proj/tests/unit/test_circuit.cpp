#include <gtest/gtest.h>

#include <map>
#include <random>

#include "ppad/circuit.hpp"

namespace ppad {
namespace {

// Gate-by-gate scalar evaluation, kept deliberately naive as a reference.
std::vector<std::uint8_t> reference_eval(const BooleanCircuit& c, const std::vector<std::uint8_t>& in) {
  std::vector<std::uint8_t> v(c.gates().size());
  std::size_t next_input = 0;
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    switch (g.kind) {
      case GateKind::Input: v[i] = in[next_input++]; break;
      case GateKind::Const: v[i] = static_cast<std::uint8_t>(g.a); break;
      case GateKind::Not: v[i] = !v[g.a]; break;
      case GateKind::And: v[i] = v[g.a] & v[g.b]; break;
      case GateKind::Or: v[i] = v[g.a] | v[g.b]; break;
      case GateKind::Xor: v[i] = v[g.a] ^ v[g.b]; break;
    }
  }
  std::vector<std::uint8_t> out;
  for (auto o : c.outputs()) out.push_back(v[o]);
  return out;
}

BooleanCircuit incrementer2() {
  // inputs: node 0 = high bit, node 1 = low bit
  return BooleanCircuit({Gate::input(), Gate::input(), Gate::logical_xor(0, 1), Gate::constant(true),
                         Gate::logical_xor(1, 3)},
                        {2, 4});
}

TEST(BitString, MsbFirstConversions) {
  EXPECT_EQ(BitString::parse("10").to_uint(), 2U);
  EXPECT_EQ(BitString::from_uint(6, 4).to_string(), "0110");
  EXPECT_TRUE(BitString::zeros(3).is_zero());
  EXPECT_THROW(BitString::parse("1a"), FormatError);
  EXPECT_THROW(BitString::parse(""), FormatError);
}

TEST(Circuit, NotGate) {
  const auto c = parse_circuit("INPUT\nNOT 0\nOUTPUTS 1\n");
  EXPECT_EQ(c.input_width(), 1U);
  EXPECT_EQ(c.output_width(), 1U);
  EXPECT_EQ(c.evaluate(BitString::parse("1")).to_string(), "0");
  EXPECT_EQ(c.evaluate(BitString::parse("0")).to_string(), "1");
}

TEST(Circuit, Identity) {
  const BooleanCircuit c({Gate::input(), Gate::input(), Gate::input(), Gate::input()}, {0, 1, 2, 3});
  EXPECT_EQ(c.evaluate(BitString::parse("0110")).to_string(), "0110");
}

TEST(Circuit, IncrementerMatchesHandTable) {
  // (x + 1) mod 4 written out before building the circuit.
  const std::map<std::string, std::string> expected{{"00", "01"}, {"01", "10"}, {"10", "11"}, {"11", "00"}};
  const auto c = incrementer2();
  for (const auto& [in, out] : expected) EXPECT_EQ(c.evaluate(BitString::parse(in)).to_string(), out) << in;
}

TEST(Circuit, WidthMismatchIsShapeError) {
  EXPECT_THROW(incrementer2().evaluate(BitString::parse("1")), ShapeError);
}

TEST(Circuit, RejectsForwardAndOutOfRangeReferences) {
  EXPECT_THROW(BooleanCircuit({Gate::input(), Gate::logical_and(0, 2), Gate::input()}, {1}), Error);
  EXPECT_THROW(parse_circuit("INPUT\nNOT 0\nNOT 5\nOUTPUTS 2\n"), FormatError);
  EXPECT_THROW(parse_circuit("INPUT\nNOT 1\nOUTPUTS 1\n"), FormatError);
  EXPECT_THROW(parse_circuit("INPUT\nOUTPUTS 3\n"), FormatError);
}

TEST(Circuit, ParseErrorsCarryLineNumbers) {
  try {
    parse_circuit("INPUT\n# comment\nNAND 0 0\nOUTPUTS 0\n");
    FAIL() << "expected a format error";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
}

TEST(Circuit, SerializeParseRoundTrip) {
  const std::string text =
      "INPUT\nINPUT\nINPUT\nAND 0 1\nOR 1 2\nXOR 3 4\nNOT 5\nCONST 1\nAND 6 7\nOR 8 0\nOUTPUTS 9 5 6\n";
  const auto c = parse_circuit(text);
  EXPECT_EQ(c.size(), 10U);
  EXPECT_EQ(serialize_circuit(c), text);
  EXPECT_EQ(serialize_circuit(parse_circuit(serialize_circuit(c))), text);
}

TEST(Circuit, CommentsAndBlankLinesIgnored) {
  const auto c = parse_circuit("# a NOT gate\n\nINPUT   # x\nNOT 0\n\nOUTPUTS 1\n");
  EXPECT_EQ(serialize_circuit(c), "INPUT\nNOT 0\nOUTPUTS 1\n");
}

TEST(TruthTable, NotAndIdentity) {
  const auto notc = from_truth_table({{BitString::parse("0"), BitString::parse("1")},
                                      {BitString::parse("1"), BitString::parse("0")}});
  EXPECT_EQ(notc.evaluate(BitString::parse("0")).to_string(), "1");
  EXPECT_EQ(notc.evaluate(BitString::parse("1")).to_string(), "0");
  std::map<BitString, BitString> id;
  for (std::uint64_t v = 0; v < 4; ++v) id.emplace(BitString::from_uint(v, 2), BitString::from_uint(v, 2));
  EXPECT_EQ(from_truth_table(id).evaluate(BitString::parse("10")).to_string(), "10");
}

TEST(TruthTable, SuccessorOfSampleLine) {
  // Line 000 -> 011 -> 101 -> 110, everything else fixed.
  std::map<BitString, BitString> table;
  const std::map<std::uint64_t, std::uint64_t> succ{{0, 3}, {3, 5}, {5, 6}};
  for (std::uint64_t v = 0; v < 8; ++v) {
    const auto it = succ.find(v);
    table.emplace(BitString::from_uint(v, 3), BitString::from_uint(it == succ.end() ? v : it->second, 3));
  }
  const auto c = from_truth_table(table);
  for (const auto& [in, out] : table) EXPECT_EQ(c.evaluate(in), out);
}

TEST(TruthTable, MissingKeysMapToZeroAndWidthsMustAgree) {
  const auto c = from_truth_table({{BitString::parse("11"), BitString::parse("101")}});
  EXPECT_EQ(c.evaluate(BitString::parse("11")).to_string(), "101");
  EXPECT_EQ(c.evaluate(BitString::parse("01")).to_string(), "000");
  EXPECT_THROW(from_truth_table({{BitString::parse("1"), BitString::parse("1")},
                                 {BitString::parse("10"), BitString::parse("1")}}),
               FormatError);
}

// Property: compiled tables reproduce themselves for every width up to 12.
TEST(TruthTable, ExhaustiveReproductionAllWidths) {
  std::mt19937_64 rng(2024);
  for (std::size_t n = 1; n <= 12; ++n) {
    const std::size_t w = 1 + n % 4;
    std::vector<std::uint64_t> values(std::size_t{1} << n);
    for (auto& v : values) v = rng() & ((std::uint64_t{1} << w) - 1);
    const auto c = compile_truth_table(n, w, values);
    EXPECT_EQ(c.tabulate(), values) << "n=" << n;
    for (std::uint64_t x = 0; x < values.size(); x += 1 + values.size() / 64) {
      EXPECT_EQ(c.evaluate_uint(x), values[x]);
    }
  }
}

// Property: lane-parallel evaluation agrees with the naive reference.
TEST(Circuit, BitSlicedAgreesWithReference) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t inputs = 1 + rng() % 6;
    std::vector<Gate> gates(inputs, Gate::input());
    for (int g = 0; g < 30; ++g) {
      const auto a = static_cast<std::uint32_t>(rng() % gates.size());
      const auto b = static_cast<std::uint32_t>(rng() % gates.size());
      switch (rng() % 5) {
        case 0: gates.push_back(Gate::logical_not(a)); break;
        case 1: gates.push_back(Gate::logical_and(a, b)); break;
        case 2: gates.push_back(Gate::logical_or(a, b)); break;
        case 3: gates.push_back(Gate::logical_xor(a, b)); break;
        default: gates.push_back(Gate::constant(rng() & 1U)); break;
      }
    }
    const BooleanCircuit c(gates, {static_cast<std::uint32_t>(gates.size() - 1), static_cast<std::uint32_t>(inputs)});
    const auto table = c.tabulate();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << inputs); ++x) {
      const BitString in = BitString::from_uint(x, inputs);
      const auto ref = reference_eval(c, in.bits());
      EXPECT_EQ(c.evaluate(in).bits(), ref);
      EXPECT_EQ(BitString::from_uint(table[x], 2).bits(), ref);
    }
  }
}

TEST(Circuit, TabulateIsThreadCountIndependent) {
  std::vector<std::uint64_t> values(1 << 14);
  std::mt19937_64 rng(5);
  for (auto& v : values) v = rng() & 7U;
  const auto c = compile_truth_table(14, 3, values);
  EXPECT_EQ(c.tabulate(1), c.tabulate(4));
  EXPECT_EQ(c.tabulate(3), values);
}

TEST(Circuit, TabulateCap) {
  std::vector<Gate> gates(21, Gate::input());
  const BooleanCircuit c(gates, {0});
  EXPECT_THROW(c.tabulate(), CapExceeded);
}

}  // namespace
}  // namespace ppad
