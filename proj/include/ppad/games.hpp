#pragma once

// Normal-form games with exact rational payoffs.
//
// Pure profiles are enumerated lexicographically with the last player's
// action varying fastest. Payoffs are stored densely, player-major within a
// profile: payoff(i, s) lives at index(s) * k + i.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ppad/error.hpp"
#include "ppad/rational.hpp"
#include "ppad/text_io.hpp"

namespace ppad {

class NormalFormGame {
 public:
  static constexpr std::uint64_t kMaxEntries = 1'000'000;

  NormalFormGame(std::vector<std::size_t> action_counts, std::vector<Rational> payoffs)
      : actions_(std::move(action_counts)), payoffs_(std::move(payoffs)) {
    if (actions_.size() < 2) throw ShapeError("a game needs at least 2 players");
    std::uint64_t profiles = 1;
    for (std::size_t n : actions_) {
      if (n < 2) throw ShapeError("every player needs at least 2 actions");
      profiles *= n;
      if (profiles * actions_.size() > kMaxEntries) {
        throw CapExceeded("payoff table exceeds " + std::to_string(kMaxEntries) + " entries");
      }
    }
    profiles_ = profiles;
    if (payoffs_.size() != profiles_ * actions_.size()) {
      throw ShapeError("expected " + std::to_string(profiles_ * actions_.size()) + " payoffs, got " +
                       std::to_string(payoffs_.size()));
    }
  }

  std::size_t players() const noexcept { return actions_.size(); }
  std::size_t actions(std::size_t i) const { return actions_.at(i); }
  const std::vector<std::size_t>& action_counts() const noexcept { return actions_; }
  std::uint64_t profile_count() const noexcept { return profiles_; }

  const Rational& payoff(std::size_t player, std::uint64_t profile) const {
    return payoffs_[profile * actions_.size() + player];
  }
  const Rational& payoff(std::size_t player, std::span<const std::size_t> profile) const {
    return payoff(player, index_of(profile));
  }
  const std::vector<Rational>& payoffs() const noexcept { return payoffs_; }

  std::uint64_t index_of(std::span<const std::size_t> profile) const {
    if (profile.size() != actions_.size()) throw ShapeError("profile has the wrong number of players");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      if (profile[i] >= actions_[i]) throw ShapeError("action index out of range");
      idx = idx * actions_[i] + profile[i];
    }
    return idx;
  }

  std::vector<std::size_t> profile_at(std::uint64_t idx) const {
    std::vector<std::size_t> s(actions_.size());
    for (std::size_t i = actions_.size(); i-- > 0;) {
      s[i] = idx % actions_[i];
      idx /= actions_[i];
    }
    return s;
  }

  friend bool operator==(const NormalFormGame&, const NormalFormGame&) = default;

 private:
  std::vector<std::size_t> actions_;
  std::vector<Rational> payoffs_;
  std::uint64_t profiles_ = 0;
};

/// Dense row-major rational matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Matrix(std::size_t r, std::size_t c, const std::vector<long>& values) : Matrix(r, c) {
    if (values.size() != r * c) throw ShapeError("matrix literal has the wrong size");
    for (std::size_t i = 0; i < values.size(); ++i) data[i] = values[i];
  }

  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Matrix transposed() const {
    Matrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Two-player game: R pays the row player, C the column player.
class BimatrixGame {
 public:
  BimatrixGame(Matrix row_payoffs, Matrix col_payoffs) : r_(std::move(row_payoffs)), c_(std::move(col_payoffs)) {
    if (r_.rows != c_.rows || r_.cols != c_.cols) throw ShapeError("R and C must have equal dimensions");
    if (r_.rows < 2 || r_.cols < 2) throw ShapeError("every player needs at least 2 actions");
  }

  std::size_t rows() const noexcept { return r_.rows; }
  std::size_t cols() const noexcept { return r_.cols; }
  const Matrix& row_payoffs() const noexcept { return r_; }
  const Matrix& col_payoffs() const noexcept { return c_; }

  NormalFormGame to_normal_form() const {
    std::vector<Rational> payoffs;
    payoffs.reserve(2 * rows() * cols());
    for (std::size_t i = 0; i < rows(); ++i) {
      for (std::size_t j = 0; j < cols(); ++j) {
        payoffs.push_back(r_(i, j));
        payoffs.push_back(c_(i, j));
      }
    }
    return NormalFormGame({rows(), cols()}, std::move(payoffs));
  }

  static BimatrixGame from_normal_form(const NormalFormGame& g) {
    if (g.players() != 2) throw ShapeError("bimatrix games have exactly 2 players");
    Matrix r(g.actions(0), g.actions(1)), c(g.actions(0), g.actions(1));
    for (std::uint64_t s = 0; s < g.profile_count(); ++s) {
      r.data[s] = g.payoff(0, s);
      c.data[s] = g.payoff(1, s);
    }
    return BimatrixGame(std::move(r), std::move(c));
  }

  friend bool operator==(const BimatrixGame&, const BimatrixGame&) = default;

 private:
  Matrix r_;
  Matrix c_;
};

/// One probability vector per player.
struct MixedProfile {
  std::vector<std::vector<Rational>> strategies;

  std::size_t players() const noexcept { return strategies.size(); }
  const std::vector<Rational>& operator[](std::size_t i) const { return strategies[i]; }

  static MixedProfile pure(const std::vector<std::size_t>& counts, const std::vector<std::size_t>& actions) {
    MixedProfile p;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      p.strategies.emplace_back(counts[i], Rational(0));
      p.strategies.back().at(actions.at(i)) = 1;
    }
    return p;
  }

  static MixedProfile uniform(const std::vector<std::size_t>& counts) {
    MixedProfile p;
    for (std::size_t n : counts) p.strategies.emplace_back(n, Rational(1, n));
    return p;
  }

  friend bool operator==(const MixedProfile&, const MixedProfile&) = default;
  friend bool operator<(const MixedProfile& a, const MixedProfile& b) { return a.strategies < b.strategies; }
};

/// Throws unless `prof` is a probability vector per player matching `g`.
inline void check_profile(const NormalFormGame& g, const MixedProfile& prof) {
  if (prof.players() != g.players()) {
    throw ShapeError("profile has " + std::to_string(prof.players()) + " players, game has " +
                     std::to_string(g.players()));
  }
  for (std::size_t i = 0; i < g.players(); ++i) {
    if (prof[i].size() != g.actions(i)) {
      throw ShapeError("player " + std::to_string(i + 1) + " has " + std::to_string(g.actions(i)) +
                       " actions, profile gives " + std::to_string(prof[i].size()));
    }
    Rational total = 0;
    for (const auto& p : prof[i]) {
      if (p < 0) throw ValidityError("negative probability for player " + std::to_string(i + 1));
      total += p;
    }
    if (total != 1) throw ValidityError("probabilities of player " + std::to_string(i + 1) + " sum to " + format_rational(total));
  }
}

/// Expected payoff to `player` when it plays pure action j, for every j, with
/// the other players mixing per `weights` (which need not be normalised).
inline std::vector<Rational> deviation_payoffs_unchecked(const NormalFormGame& g,
                                                         const std::vector<std::vector<Rational>>& weights,
                                                         std::size_t player) {
  std::vector<Rational> dev(g.actions(player), Rational(0));
  const std::size_t k = g.players();
  std::vector<std::size_t> s(k, 0);
  Rational w;
  for (std::uint64_t idx = 0; idx < g.profile_count(); ++idx) {
    w = 1;
    for (std::size_t r = 0; r < k && w != 0; ++r) {
      if (r != player) w *= weights[r][s[r]];
    }
    if (w != 0) dev[s[player]] += g.payoff(player, idx) * w;
    for (std::size_t r = k; r-- > 0;) {
      if (++s[r] < g.actions(r)) break;
      s[r] = 0;
    }
  }
  return dev;
}

inline std::vector<Rational> deviation_payoffs(const NormalFormGame& g, const MixedProfile& prof, std::size_t player) {
  check_profile(g, prof);
  if (player >= g.players()) throw ShapeError("player index out of range");
  return deviation_payoffs_unchecked(g, prof.strategies, player);
}

/// Expected payoff to `player` when it plays pure `action` and the others mix.
inline Rational pure_deviation_payoff(const NormalFormGame& g, const MixedProfile& prof, std::size_t player,
                                      std::size_t action) {
  auto dev = deviation_payoffs(g, prof, player);
  if (action >= dev.size()) throw ShapeError("action index out of range");
  return dev[action];
}

inline Rational expected_payoff(const NormalFormGame& g, const MixedProfile& prof, std::size_t player) {
  const auto dev = deviation_payoffs(g, prof, player);
  Rational total = 0;
  for (std::size_t j = 0; j < dev.size(); ++j) total += prof[player][j] * dev[j];
  return total;
}

/// Pure actions maximising the deviation payoff, ascending.
inline std::vector<std::size_t> best_response_set(const NormalFormGame& g, const MixedProfile& prof,
                                                  std::size_t player) {
  const auto dev = deviation_payoffs(g, prof, player);
  const Rational best = *std::max_element(dev.begin(), dev.end());
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < dev.size(); ++j) {
    if (dev[j] == best) out.push_back(j);
  }
  return out;
}

struct NashVerdict {
  bool accepted = false;
  /// Largest dev(i,j) - dev(i,j') - eps over players i, actions j and
  /// supported actions j', clamped at 0.
  Rational max_violation;
};

/// Exact check that whenever dev(i,j) > dev(i,j') + eps, player i puts no
/// weight on j'.
inline NashVerdict verify_nash(const NormalFormGame& g, const MixedProfile& prof, const Rational& eps = 0) {
  if (eps < 0) throw ValidityError("eps must be non-negative");
  check_profile(g, prof);
  Rational worst = 0;
  for (std::size_t i = 0; i < g.players(); ++i) {
    const auto dev = deviation_payoffs_unchecked(g, prof.strategies, i);
    const Rational best = *std::max_element(dev.begin(), dev.end());
    for (std::size_t j = 0; j < dev.size(); ++j) {
      if (prof[i][j] == 0) continue;
      Rational margin = best - dev[j] - eps;
      if (margin > worst) worst = margin;
    }
  }
  return {worst == 0, worst};
}

/// Largest gain any player gets by switching to a pure best response,
/// max_i (max_j dev(i,j) - expected payoff of i).
inline Rational approximation_regret(const NormalFormGame& g, const MixedProfile& prof) {
  check_profile(g, prof);
  Rational worst = 0;
  for (std::size_t i = 0; i < g.players(); ++i) {
    const auto dev = deviation_payoffs_unchecked(g, prof.strategies, i);
    Rational expected = 0;
    for (std::size_t j = 0; j < dev.size(); ++j) expected += prof[i][j] * dev[j];
    const Rational gain = *std::max_element(dev.begin(), dev.end()) - expected;
    if (gain > worst) worst = gain;
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Game file:
//   GAME k=<k>
//   ACTIONS <n1> ... <nk>
//   <s1> ... <sk> : <u1> ... <uk>     one line per pure profile, in order
// Profile file: `PROFILE` then one line of probabilities per player.

inline std::string serialize_game(const NormalFormGame& g) {
  std::ostringstream out;
  out << "GAME k=" << g.players() << "\nACTIONS";
  for (auto n : g.action_counts()) out << ' ' << n;
  out << '\n';
  for (std::uint64_t idx = 0; idx < g.profile_count(); ++idx) {
    const auto s = g.profile_at(idx);
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
    out << " :";
    for (std::size_t i = 0; i < g.players(); ++i) out << ' ' << format_rational(g.payoff(i, idx));
    out << '\n';
  }
  return out.str();
}

inline std::string serialize_game(const BimatrixGame& g) { return serialize_game(g.to_normal_form()); }

inline NormalFormGame read_game(LineReader& reader) {
  auto line = reader.next();
  if (!line) reader.fail("empty input; expected 'GAME k=<k>'");
  auto tokens = split_ws(*line);
  std::optional<std::uint64_t> k;
  if (tokens.size() != 2 || tokens[0] != "GAME" || !(k = parse_keyed_uint(tokens[1], "k"))) {
    reader.fail("expected header 'GAME k=<k>'");
  }
  if (*k < 2 || *k > 64) reader.fail("player count must be in 2..64");
  line = reader.next();
  if (!line) reader.fail("missing ACTIONS line");
  tokens = split_ws(*line);
  if (tokens.size() != *k + 1 || tokens[0] != "ACTIONS") {
    reader.fail("expected 'ACTIONS' followed by " + std::to_string(*k) + " counts");
  }
  std::vector<std::size_t> counts;
  std::uint64_t profiles = 1;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    auto n = parse_uint(tokens[i]);
    if (!n || *n < 2) reader.fail("action counts must be integers >= 2");
    counts.push_back(*n);
    profiles *= *n;
    if (profiles * *k > NormalFormGame::kMaxEntries) reader.fail("payoff table exceeds the 10^6 entry cap");
  }
  std::vector<Rational> payoffs;
  payoffs.reserve(profiles * *k);
  std::vector<std::size_t> expected(*k, 0);
  for (std::uint64_t idx = 0; idx < profiles; ++idx) {
    line = reader.next();
    if (!line) reader.fail("expected " + std::to_string(profiles) + " payoff lines, got " + std::to_string(idx));
    tokens = split_ws(*line);
    if (tokens.size() != 2 * *k + 1 || tokens[*k] != ":") {
      reader.fail("payoff line must read '<s1> ... <sk> : <u1> ... <uk>'");
    }
    for (std::size_t i = 0; i < *k; ++i) {
      auto s = parse_uint(tokens[i]);
      if (!s || *s != expected[i]) reader.fail("profiles must be listed in lexicographic order");
    }
    for (std::size_t i = 0; i < *k; ++i) {
      try {
        payoffs.push_back(parse_rational(tokens[*k + 1 + i]));
      } catch (const Error& e) {
        reader.fail(e.what());
      }
    }
    for (std::size_t r = *k; r-- > 0;) {
      if (++expected[r] < counts[r]) break;
      expected[r] = 0;
    }
  }
  return NormalFormGame(std::move(counts), std::move(payoffs));
}

inline NormalFormGame parse_game(std::istream& in) {
  LineReader reader(in);
  NormalFormGame g = read_game(reader);
  if (reader.next()) reader.fail("unexpected content after the last payoff line");
  return g;
}

inline NormalFormGame parse_game(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_game(in);
}

inline std::string serialize_profile(const MixedProfile& p) {
  std::ostringstream out;
  out << "PROFILE\n";
  for (const auto& v : p.strategies) {
    for (std::size_t j = 0; j < v.size(); ++j) out << (j ? " " : "") << format_rational(v[j]);
    out << '\n';
  }
  return out.str();
}

/// Reads a `PROFILE` block; rows are taken until the next non-numeric line or
/// end of input. Shape and normalisation are checked against a game later.
inline MixedProfile read_profile(LineReader& reader) {
  auto line = reader.next();
  if (!line || *line != "PROFILE") reader.fail("expected 'PROFILE'");
  MixedProfile p;
  while ((line = reader.next())) {
    if (*line == "PROFILE") {
      reader.unread(*line);
      break;
    }
    std::vector<Rational> row;
    for (auto t : split_ws(*line)) {
      try {
        row.push_back(parse_rational(t));
      } catch (const Error& e) {
        reader.fail(e.what());
      }
    }
    p.strategies.push_back(std::move(row));
  }
  if (p.strategies.empty()) reader.fail("PROFILE block has no rows");
  return p;
}

inline MixedProfile parse_profile(std::string_view text) {
  std::istringstream in{std::string(text)};
  LineReader reader(in);
  MixedProfile p = read_profile(reader);
  if (reader.next()) reader.fail("unexpected content after the profile");
  return p;
}

}  // namespace ppad
